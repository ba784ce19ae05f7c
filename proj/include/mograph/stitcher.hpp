#pragma once

#include <string>
#include <vector>

#include "mograph/graph.hpp"
#include "mograph/optimizer.hpp"
#include "mograph/phrases.hpp"

namespace mograph {

struct StitchParams {
    double blend_seconds = 0.25;
    double max_time_stretch = 1.5;  // >= 1
    double output_fps = 25.0;

    bool operator==(const StitchParams& other) const = default;
};

struct StitchEvent {
    int phrase_index = 0;
    std::string kind;  // "stretch_clamped"
    double requested_seconds = 0.0;
    double actual_seconds = 0.0;
};

struct StitchReport {
    std::vector<StitchEvent> events;
};

// Uniform time scaling of one segment onto the output frame rate. The
// stretch factor is clamped to [1/max_time_stretch, max_time_stretch], so
// the result lasts clamp(target, duration/max, duration*max). Quaternion
// slerp between neighboring source frames, linear root interpolation.
MotionClip time_warp(const MotionSegment& segment, double target_seconds,
                     const StitchParams& params);

// One continuous clip covering the phrase span: each assigned segment is
// warped to its slot, root-aligned to the previous output frame (ground
// plane + yaw), and residual boundary offsets are decayed linearly over
// the blend window so per-frame jumps stay within
//   max intra-segment jump + boundary distance / blend frames.
MotionClip assemble(const SynthesisPath& path, const MotionGraph& graph,
                    const std::vector<Phrase>& phrases, const StitchParams& params,
                    StitchReport* report = nullptr);

}  // namespace mograph
