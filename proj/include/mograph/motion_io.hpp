#pragma once

#include <string>

#include "mograph/motion_clip.hpp"

namespace mograph {

enum class MotionFormat { json, bvh };

/// Loads a clip from the motion JSON schema or a standard BVH file.
/// BVH Euler channels convert to quaternions in the declared channel order.
/// Throws ParseError, SchemaError or ValueError.
MotionClip load_motion_clip(const std::string& path, MotionFormat format);

/// Format inferred from the extension (.bvh vs everything else).
MotionClip load_motion_clip(const std::string& path);

void save_motion_clip(const MotionClip& clip, const std::string& path);

/// Parses BVH text directly; exposed for tests.
MotionClip parse_bvh(const std::string& text, const std::string& source_id);

/// Parses the motion JSON schema directly; exposed for tests.
MotionClip parse_motion_json(const std::string& text, const std::string& fallback_source_id);

}  // namespace mograph
