#include "mograph/motion_clip.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mograph/errors.hpp"

namespace mograph {

namespace {

bool contains_icase(const std::string& haystack, const std::string& needle) {
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; });
    return it != haystack.end();
}

}  // namespace

int Skeleton::index_of(const std::string& name) const {
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> Skeleton::salient_indices() const {
    std::vector<int> out;
    out.reserve(salient_joint_names.size());
    for (const auto& name : salient_joint_names) out.push_back(index_of(name));
    return out;
}

std::vector<std::string> Skeleton::guess_salient(const std::vector<Joint>& joints) {
    std::vector<std::string> out;
    for (const auto& j : joints) {
        if (j.parent < 0 || contains_icase(j.name, "head") ||
            contains_icase(j.name, "hand") || contains_icase(j.name, "foot")) {
            out.push_back(j.name);
        }
    }
    return out;
}

void Skeleton::validate() const {
    if (joints.empty()) throw SchemaError("skeleton has no joints");
    int roots = 0;
    for (size_t i = 0; i < joints.size(); ++i) {
        const Joint& j = joints[i];
        if (j.parent < 0) {
            ++roots;
        } else if (j.parent >= static_cast<int>(i)) {
            throw SchemaError("joint '" + j.name + "' is not topologically ordered");
        }
        if (!j.offset.allFinite()) throw ValueError("non-finite offset on joint '" + j.name + "'");
    }
    if (roots != 1) throw SchemaError("skeleton must have exactly one root joint");
    for (const auto& name : salient_joint_names) {
        if (index_of(name) < 0) throw SchemaError("salient joint '" + name + "' not in skeleton");
    }
}

bool Skeleton::operator==(const Skeleton& other) const {
    if (joints.size() != other.joints.size()) return false;
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].name != other.joints[i].name || joints[i].parent != other.joints[i].parent ||
            joints[i].offset != other.joints[i].offset) {
            return false;
        }
    }
    return salient_joint_names == other.salient_joint_names;
}

void MotionClip::validate() const {
    skeleton.validate();
    if (!(fps > 0.0) || !std::isfinite(fps)) throw ValueError("fps must be positive");
    if (frames.size() < 2) throw SchemaError("clip needs at least 2 frames");
    const size_t joint_count = skeleton.joints.size();
    for (const auto& frame : frames) {
        if (frame.joint_rotations.size() != joint_count) {
            throw SchemaError("frame rotation count does not match joint count");
        }
        if (!frame.root_position.allFinite()) throw ValueError("non-finite root position");
        for (const auto& q : frame.joint_rotations) {
            if (!std::isfinite(q.w()) || !std::isfinite(q.x()) || !std::isfinite(q.y()) ||
                !std::isfinite(q.z())) {
                throw ValueError("non-finite quaternion");
            }
            if (std::abs(q.norm() - 1.0) > 1e-6) throw ValueError("quaternion is not unit-norm");
        }
    }
}

bool MotionClip::operator==(const MotionClip& other) const {
    if (!(skeleton == other.skeleton) || fps != other.fps || source_id != other.source_id ||
        frames.size() != other.frames.size()) {
        return false;
    }
    for (size_t f = 0; f < frames.size(); ++f) {
        if (frames[f].root_position != other.frames[f].root_position) return false;
        if (frames[f].joint_rotations.size() != other.frames[f].joint_rotations.size()) return false;
        for (size_t j = 0; j < frames[f].joint_rotations.size(); ++j) {
            if (frames[f].joint_rotations[j].coeffs() != other.frames[f].joint_rotations[j].coeffs()) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Vec3> forward_kinematics(const MotionClip& clip, int frame_index) {
    if (frame_index < 0 || frame_index >= clip.frame_count()) {
        throw IndexError("frame index " + std::to_string(frame_index) + " out of range");
    }
    const MotionFrame& frame = clip.frames[frame_index];
    const auto& joints = clip.skeleton.joints;
    std::vector<Vec3> positions(joints.size());
    std::vector<Quat> rotations(joints.size());
    for (size_t i = 0; i < joints.size(); ++i) {
        if (joints[i].parent < 0) {
            positions[i] = frame.root_position;
            rotations[i] = frame.joint_rotations[i];
        } else {
            const int p = joints[i].parent;
            positions[i] = positions[p] + rotations[p] * joints[i].offset;
            rotations[i] = rotations[p] * frame.joint_rotations[i];
        }
    }
    return positions;
}

std::vector<double> default_joint_weights(const Skeleton& skeleton) {
    std::vector<double> weights(skeleton.joints.size(), 0.25);
    for (int idx : skeleton.salient_indices()) {
        if (idx >= 0) weights[idx] = 1.0;
    }
    return weights;
}

StrengthCurve compute_motion_strength(const MotionClip& clip,
                                      const std::vector<double>& joint_weights,
                                      int smooth_window) {
    if (smooth_window < 1 || smooth_window % 2 == 0) {
        throw ValueError("smooth_window must be odd and >= 1");
    }
    if (joint_weights.size() != clip.skeleton.joints.size()) {
        throw ValueError("joint_weights length must equal joint count");
    }
    for (double w : joint_weights) {
        if (w < 0.0 || !std::isfinite(w)) throw ValueError("joint weights must be non-negative");
    }
    const int n = clip.frame_count();
    std::vector<double> raw(n, 0.0);
    std::vector<Vec3> prev = forward_kinematics(clip, 0);
    for (int t = 1; t < n; ++t) {
        std::vector<Vec3> cur = forward_kinematics(clip, t);
        double sum = 0.0;
        for (size_t j = 0; j < cur.size(); ++j) {
            sum += joint_weights[j] * (cur[j] - prev[j]).norm();
        }
        raw[t] = sum * clip.fps;
        prev = std::move(cur);
    }
    if (n > 1) raw[0] = raw[1];

    // Centered moving average; indices clamped at the edges.
    std::vector<double> smooth(n, 0.0);
    const int half = smooth_window / 2;
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) {
            acc += raw[std::clamp(t + k, 0, n - 1)];
        }
        smooth[t] = acc / smooth_window;
    }

    const double peak = smooth.empty() ? 0.0 : *std::max_element(smooth.begin(), smooth.end());
    if (peak > 0.0) {
        for (double& v : smooth) v /= peak;
    }
    return StrengthCurve{std::move(smooth), clip.fps, Normalization::unit_max};
}

StrengthCurve compute_motion_strength(const MotionClip& clip, int smooth_window) {
    return compute_motion_strength(clip, default_joint_weights(clip.skeleton), smooth_window);
}

std::vector<double> resample_values(const std::vector<double>& values, int target_len) {
    if (target_len < 2) throw ValueError("target_len must be >= 2");
    if (values.size() < 2) throw ValueError("cannot resample a curve with fewer than 2 samples");
    const int n = static_cast<int>(values.size());
    std::vector<double> out(target_len);
    out.front() = values.front();
    out.back() = values.back();
    for (int k = 1; k + 1 < target_len; ++k) {
        const double s = static_cast<double>(k) * (n - 1) / (target_len - 1);
        const int i = static_cast<int>(s);
        const double frac = s - i;
        out[k] = values[i] * (1.0 - frac) + values[std::min(i + 1, n - 1)] * frac;
    }
    return out;
}

StrengthCurve resample_curve(const StrengthCurve& curve, int target_len) {
    StrengthCurve out;
    out.values = resample_values(curve.values, target_len);
    // Same time span, new sample count.
    out.fps = curve.values.size() < 2
                  ? curve.fps
                  : curve.fps * (target_len - 1) / (static_cast<double>(curve.values.size()) - 1);
    out.normalization = curve.normalization;
    return out;
}

}  // namespace mograph
