#pragma once

// Small builders shared by the unit tests.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mograph/motion_clip.hpp"
#include "mograph/segmentation.hpp"

namespace testutil {

inline mograph::Skeleton two_joint_skeleton() {
    mograph::Skeleton s;
    s.joints.push_back({"root", -1, mograph::Vec3(0, 0, 0)});
    s.joints.push_back({"hand", 0, mograph::Vec3(0.5, 0, 0)});
    s.salient_joint_names = {"root", "hand"};
    s.validate();
    return s;
}

inline mograph::MotionClip static_clip(const mograph::Skeleton& skeleton,
                                       const mograph::Vec3& root_pos, int frames,
                                       const std::string& source_id, double fps = 25.0) {
    mograph::MotionClip clip;
    clip.skeleton = skeleton;
    clip.fps = fps;
    clip.source_id = source_id;
    for (int f = 0; f < frames; ++f) {
        mograph::MotionFrame frame;
        frame.root_position = root_pos;
        frame.joint_rotations.assign(skeleton.joints.size(), mograph::Quat::Identity());
        clip.frames.push_back(frame);
    }
    return clip;
}

// Whole-clip non-semantic segment with an explicit strength curve.
inline mograph::MotionSegment wrap_segment(const mograph::MotionClip& clip,
                                           const std::string& segment_id,
                                           std::vector<double> strength_values = {}) {
    mograph::MotionSegment seg;
    seg.clip = clip;
    seg.source_id = clip.source_id;
    seg.start_frame = 0;
    seg.end_frame = clip.frame_count();
    seg.segment_id = segment_id;
    if (strength_values.empty()) {
        strength_values.assign(static_cast<size_t>(clip.frame_count()), 1.0);
    }
    seg.strength.values = std::move(strength_values);
    seg.strength.fps = clip.fps;
    seg.strength.normalization = mograph::Normalization::unit_max;
    return seg;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Unique scratch directory, removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& label) {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               (label + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testutil
