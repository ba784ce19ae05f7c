#include "mograph/stitcher.hpp"

#include <algorithm>
#include <cmath>

#include "mograph/errors.hpp"

namespace mograph {

namespace {

int root_index(const Skeleton& skeleton) {
    for (size_t i = 0; i < skeleton.joints.size(); ++i) {
        if (skeleton.joints[i].parent < 0) return static_cast<int>(i);
    }
    throw SchemaError("skeleton has no root");
}

Quat slerp_shortest(const Quat& a, const Quat& b, double alpha) {
    return a.slerp(alpha, b).normalized();
}

MotionFrame sample_frame(const MotionClip& clip, double source_frame) {
    const int last = clip.frame_count() - 1;
    const double f = std::clamp(source_frame, 0.0, static_cast<double>(last));
    const int f0 = static_cast<int>(f);
    const int f1 = std::min(f0 + 1, last);
    const double alpha = f - f0;

    const MotionFrame& a = clip.frames[f0];
    const MotionFrame& b = clip.frames[f1];
    MotionFrame out;
    out.root_position = (1.0 - alpha) * a.root_position + alpha * b.root_position;
    out.joint_rotations.reserve(a.joint_rotations.size());
    for (size_t j = 0; j < a.joint_rotations.size(); ++j) {
        out.joint_rotations.push_back(slerp_shortest(a.joint_rotations[j], b.joint_rotations[j], alpha));
    }
    return out;
}

// Resample the whole segment onto exactly frame_count output frames.
MotionClip resample_to_frames(const MotionSegment& segment, int frame_count, double output_fps) {
    MotionClip out;
    out.skeleton = segment.clip.skeleton;
    out.fps = output_fps;
    out.source_id = segment.segment_id;
    out.frames.reserve(frame_count);
    const int src_last = segment.clip.frame_count() - 1;
    for (int i = 0; i < frame_count; ++i) {
        const double u = frame_count > 1 ? static_cast<double>(i) / (frame_count - 1) : 0.0;
        out.frames.push_back(sample_frame(segment.clip, u * src_last));
    }
    return out;
}

double clamp_target(double segment_seconds, double target_seconds, double max_stretch) {
    return std::clamp(target_seconds, segment_seconds / max_stretch,
                      segment_seconds * max_stretch);
}

double yaw_about_y(const Quat& q) {
    const Vec3 fwd = q * Vec3::UnitZ();
    if (fwd.x() * fwd.x() + fwd.z() * fwd.z() > 1e-12) return std::atan2(fwd.x(), fwd.z());
    const Vec3 side = q * Vec3::UnitX();
    return -std::atan2(side.z(), side.x());
}

// Rigidly move a clip: yaw about +Y then ground-plane translation.
void apply_ground_transform(MotionClip& clip, int root, double dyaw, const Vec3& translation) {
    const Quat ryaw(Eigen::AngleAxisd(dyaw, Vec3::UnitY()));
    for (auto& frame : clip.frames) {
        frame.root_position = ryaw * frame.root_position + translation;
        frame.joint_rotations[root] = (ryaw * frame.joint_rotations[root]).normalized();
    }
}

}  // namespace

MotionClip time_warp(const MotionSegment& segment, double target_seconds,
                     const StitchParams& params) {
    if (!(target_seconds > 0.0)) throw ValueError("warp target must be positive");
    if (params.max_time_stretch < 1.0) throw ValueError("max_time_stretch must be >= 1");
    if (!(params.output_fps > 0.0)) throw ValueError("output_fps must be positive");

    const double duration = segment.clip.duration_seconds();
    const double actual = clamp_target(duration, target_seconds, params.max_time_stretch);
    const int frames = std::max(2, static_cast<int>(std::lround(actual * params.output_fps)) + 1);
    return resample_to_frames(segment, frames, params.output_fps);
}

MotionClip assemble(const SynthesisPath& path, const MotionGraph& graph,
                    const std::vector<Phrase>& phrases, const StitchParams& params,
                    StitchReport* report) {
    if (path.assignments.size() != phrases.size()) {
        throw LengthMismatchError("path and phrase counts differ");
    }
    if (phrases.empty()) throw ValueError("nothing to assemble");
    for (size_t i = 1; i < phrases.size(); ++i) {
        if (phrases[i].start_seconds < phrases[i - 1].end_seconds) {
            throw ValueError("phrases must be ordered and non-overlapping");
        }
    }

    const double fps = params.output_fps;
    const size_t n = phrases.size();

    // Cumulative frame boundaries over the whole span keep rounding error
    // under half a frame in total. Gaps between phrases are absorbed into
    // the preceding slot so the output is one gapless clip.
    const double t0 = phrases.front().start_seconds;
    std::vector<int> boundary(n);
    for (size_t i = 0; i < n; ++i) {
        const double end = i + 1 < n ? phrases[i + 1].start_seconds : phrases[i].end_seconds;
        boundary[i] = static_cast<int>(std::lround((end - t0) * fps));
        if (boundary[i] < (i > 0 ? boundary[i - 1] : 0) + 1) {
            boundary[i] = (i > 0 ? boundary[i - 1] : 0) + 1;
        }
    }

    const int blend_frames = std::max(1, static_cast<int>(std::lround(params.blend_seconds * fps)));
    const int root = root_index(graph.node_or_throw(path.assignments[0]).clip.skeleton);

    MotionClip out;
    out.skeleton = graph.node_or_throw(path.assignments[0]).clip.skeleton;
    out.fps = fps;
    out.source_id = "assembled";

    for (size_t i = 0; i < n; ++i) {
        const MotionSegment& seg = graph.node_or_throw(path.assignments[i]);
        const int prev_boundary = i > 0 ? boundary[i - 1] : 0;
        const int slot_frames = boundary[i] - prev_boundary + 1;

        const double target = (slot_frames - 1) / fps;
        const double actual = clamp_target(seg.clip.duration_seconds(), target,
                                           params.max_time_stretch);
        int frames = slot_frames;
        if (std::abs(actual - target) > 0.5 / fps) {
            frames = std::max(2, static_cast<int>(std::lround(actual * fps)) + 1);
            if (report) {
                report->events.push_back({phrases[i].index, "stretch_clamped", target, actual});
            }
        }
        MotionClip piece = resample_to_frames(seg, frames, fps);

        if (out.frames.empty()) {
            out.frames = std::move(piece.frames);
            continue;
        }

        // Ground-plane alignment of the piece onto the current output end.
        const MotionFrame& tail = out.frames.back();
        const MotionFrame& head = piece.frames.front();
        const double dyaw = yaw_about_y(tail.joint_rotations[root]) -
                            yaw_about_y(head.joint_rotations[root]);
        const Quat ryaw(Eigen::AngleAxisd(dyaw, Vec3::UnitY()));
        const Vec3 rotated_head = ryaw * head.root_position;
        const Vec3 translation(tail.root_position.x() - rotated_head.x(), 0.0,
                               tail.root_position.z() - rotated_head.z());
        apply_ground_transform(piece, root, dyaw, translation);

        // Residual boundary offsets, decayed linearly over the blend window.
        const Vec3 dpos = tail.root_position - piece.frames.front().root_position;
        std::vector<Quat> drot;
        drot.reserve(tail.joint_rotations.size());
        for (size_t j = 0; j < tail.joint_rotations.size(); ++j) {
            drot.push_back(
                (tail.joint_rotations[j] * piece.frames.front().joint_rotations[j].conjugate())
                    .normalized());
        }
        const Quat identity = Quat::Identity();
        for (int f = 1; f < piece.frame_count(); ++f) {
            MotionFrame frame = piece.frames[f];
            const double decay = std::max(0.0, 1.0 - static_cast<double>(f) / blend_frames);
            if (decay > 0.0) {
                frame.root_position += decay * dpos;
                for (size_t j = 0; j < frame.joint_rotations.size(); ++j) {
                    frame.joint_rotations[j] =
                        (slerp_shortest(identity, drot[j], decay) * frame.joint_rotations[j])
                            .normalized();
                }
            }
            out.frames.push_back(std::move(frame));
        }
    }
    return out;
}

}  // namespace mograph
