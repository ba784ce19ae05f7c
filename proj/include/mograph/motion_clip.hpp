#pragma once

#include <string>
#include <vector>

#include "mograph/skeleton.hpp"

namespace mograph {

struct MotionFrame {
    Vec3 root_position = Vec3::Zero();  // meters, world space
    std::vector<Quat> joint_rotations;  // one unit quaternion per joint
};

/// Fixed-rate skeletal animation. Immutable after construction by convention;
/// every operation in the library treats clips as values.
struct MotionClip {
    Skeleton skeleton;
    double fps = 25.0;
    std::vector<MotionFrame> frames;
    std::string source_id;

    int frame_count() const { return static_cast<int>(frames.size()); }
    double duration_seconds() const {
        return frames.size() < 2 ? 0.0 : (frames.size() - 1) / fps;
    }

    /// Full invariant check (>= 2 frames, fps > 0, per-frame rotation counts,
    /// unit quaternions within 1e-6, finite values). Loaders call this;
    /// internally produced slices are trusted.
    void validate() const;

    bool operator==(const MotionClip& other) const;
};

enum class Normalization { raw, unit_max };

/// Per-frame scalar motion intensity aligned 1:1 with a clip's frames.
struct StrengthCurve {
    std::vector<double> values;
    double fps = 25.0;
    Normalization normalization = Normalization::raw;

    bool operator==(const StrengthCurve& other) const {
        return values == other.values && fps == other.fps &&
               normalization == other.normalization;
    }
};

/// Global joint positions (meters) for one frame.
/// Joint i sits at parent_global * offset_i; the root sits at root_position.
std::vector<Vec3> forward_kinematics(const MotionClip& clip, int frame_index);

/// Weighted sum of global joint speeds (m/s), frame 0 copying frame 1,
/// smoothed by an edge-clamped centered moving average, normalized to unit max.
StrengthCurve compute_motion_strength(const MotionClip& clip,
                                      const std::vector<double>& joint_weights,
                                      int smooth_window);

/// Same with default weights (1.0 for salient joints, 0.25 otherwise).
StrengthCurve compute_motion_strength(const MotionClip& clip, int smooth_window = 5);

std::vector<double> default_joint_weights(const Skeleton& skeleton);

/// Linear resampling onto target_len uniformly spaced samples over the same
/// time range; endpoints preserved exactly.
std::vector<double> resample_values(const std::vector<double>& values, int target_len);

StrengthCurve resample_curve(const StrengthCurve& curve, int target_len);

}  // namespace mograph
