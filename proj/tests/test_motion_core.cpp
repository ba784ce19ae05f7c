#include <cmath>
#include <fstream>
#include <random>

#include <doctest.h>

#include "mograph/errors.hpp"
#include "mograph/motion_clip.hpp"
#include "mograph/motion_io.hpp"
#include "mograph/wav.hpp"
#include "helpers.hpp"

using namespace mograph;

namespace {

MotionClip swing_clip(int frames = 40, double fps = 25.0) {
    MotionClip clip = testutil::static_clip(testutil::two_joint_skeleton(), Vec3(0, 1, 0),
                                            frames, "swing", fps);
    for (int f = 0; f < frames; ++f) {
        const double angle = 0.8 * std::sin(2.0 * M_PI * f / frames);
        clip.frames[f].joint_rotations[0] = Quat(Eigen::AngleAxisd(angle, Vec3::UnitZ()));
    }
    return clip;
}

}  // namespace

TEST_CASE("forward kinematics rotates child offsets") {
    // 90 degrees about Z carries the +X offset onto +Y: frozen by hand.
    MotionClip clip = testutil::static_clip(testutil::two_joint_skeleton(), Vec3(1, 2, 3), 2, "fk");
    clip.frames[0].joint_rotations[0] =
        Quat(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()));
    clip.frames[0].joint_rotations[0].normalize();
    const std::vector<Vec3> pos = forward_kinematics(clip, 0);
    CHECK(pos[0].isApprox(Vec3(1, 2, 3), 1e-12));
    CHECK((pos[1] - Vec3(1, 2.5, 3)).norm() < 1e-12);

    CHECK_THROWS_AS(forward_kinematics(clip, 5), IndexError);
}

TEST_CASE("motion strength: constant speed normalizes to all ones") {
    // Root translating 0.1 m per frame at 25 fps moves every joint at
    // 2.5 m/s; a constant raw curve normalizes to 1 everywhere.
    MotionClip clip = testutil::static_clip(testutil::two_joint_skeleton(), Vec3(0, 0, 0), 30, "c");
    for (int f = 0; f < 30; ++f) clip.frames[f].root_position = Vec3(0.1 * f, 0, 0);
    const StrengthCurve strength = compute_motion_strength(clip);
    CHECK(strength.normalization == Normalization::unit_max);
    CHECK(strength.values.size() == 30);
    for (double v : strength.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("motion strength: two-speed clip keeps the 0.5 plateau") {
    const int n = 60;
    MotionClip clip = testutil::static_clip(testutil::two_joint_skeleton(), Vec3(0, 0, 0), n, "t");
    double x = 0.0;
    for (int f = 0; f < n; ++f) {
        clip.frames[f].root_position = Vec3(x, 0, 0);
        x += f < n / 2 ? 0.1 : 0.2;
    }
    const StrengthCurve strength = compute_motion_strength(clip);
    // Interior frames whose smoothing window sits inside one speed region.
    CHECK(strength.values[10] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(strength.values[50] == doctest::Approx(1.0).epsilon(1e-12));
    // Frame 0 copies frame 1 before smoothing, so the start stays flat.
    CHECK(strength.values[0] == doctest::Approx(strength.values[1]).epsilon(1e-9));
}

TEST_CASE("motion strength is invariant to rigid placement of the clip") {
    const MotionClip clip = swing_clip();
    MotionClip moved = clip;
    const Quat yaw(Eigen::AngleAxisd(1.1, Vec3::UnitY()));
    for (auto& frame : moved.frames) {
        frame.root_position = yaw * frame.root_position + Vec3(4, 0, -2);
        frame.joint_rotations[0] = (yaw * frame.joint_rotations[0]).normalized();
    }
    const StrengthCurve a = compute_motion_strength(clip);
    const StrengthCurve b = compute_motion_strength(moved);
    REQUIRE(a.values.size() == b.values.size());
    for (size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("motion strength input checks") {
    const MotionClip clip = swing_clip();
    CHECK_THROWS_AS(compute_motion_strength(clip, 4), ValueError);   // even window
    CHECK_THROWS_AS(compute_motion_strength(clip, -1), ValueError);
    CHECK_THROWS_AS(compute_motion_strength(clip, {1.0}, 5), ValueError);  // weight count
    CHECK_THROWS_AS(compute_motion_strength(clip, {1.0, -0.5}, 5), ValueError);
}

TEST_CASE("resample_values hits the frozen ramp") {
    const std::vector<double> out = resample_values({0.0, 2.0, 0.0}, 5);
    const std::vector<double> want = {0.0, 1.0, 2.0, 1.0, 0.0};
    REQUIRE(out.size() == want.size());
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(want[i]).epsilon(1e-12));

    CHECK_THROWS_AS(resample_values({0.0, 1.0}, 1), ValueError);
    CHECK_THROWS_AS(resample_values({0.0}, 4), ValueError);

    // Endpoints exact for arbitrary sizes.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(17);
    for (double& v : values) v = dist(rng);
    const std::vector<double> r = resample_values(values, 40);
    CHECK(r.front() == values.front());
    CHECK(r.back() == values.back());
}

TEST_CASE("motion json round-trip is field-exact") {
    const MotionClip clip = swing_clip(25);
    testutil::TempDir tmp("motion_io");
    const std::string path = tmp.file("clip.json");
    save_motion_clip(clip, path);
    const MotionClip back = load_motion_clip(path);
    CHECK(back == clip);
}

TEST_CASE("motion json rejects malformed and invalid input") {
    testutil::TempDir tmp("motion_bad");
    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_motion_clip(tmp.file("broken.json")), ParseError);
    {
        std::ofstream out(tmp.file("empty.json"));
        out << "{\"fps\": 25}";
    }
    CHECK_THROWS_AS(load_motion_clip(tmp.file("empty.json")), SchemaError);
    CHECK_THROWS_AS(load_motion_clip(tmp.file("missing.json")), IoError);
}

TEST_CASE("bvh parsing: channel order, end sites, fps") {
    testutil::TempDir tmp("bvh");
    const std::string path = tmp.file("arm.bvh");
    {
        std::ofstream out(path);
        out << "HIERARCHY\n"
               "ROOT root\n"
               "{\n"
               "  OFFSET 0 0 0\n"
               "  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"
               "  JOINT hand\n"
               "  {\n"
               "    OFFSET 0.5 0 0\n"
               "    CHANNELS 3 Zrotation Xrotation Yrotation\n"
               "    End Site\n"
               "    {\n"
               "      OFFSET 0.1 0 0\n"
               "    }\n"
               "  }\n"
               "}\n"
               "MOTION\n"
               "Frames: 2\n"
               "Frame Time: 0.04\n"
               "0 1 0 0 0 0 0 0 0\n"
               "0 1 0 90 0 0 0 0 0\n";
    }
    const MotionClip clip = load_motion_clip(path);
    CHECK(clip.fps == doctest::Approx(25.0));
    REQUIRE(clip.skeleton.joints.size() == 2);  // end sites are not joints
    CHECK(clip.skeleton.joints[1].name == "hand");
    CHECK(clip.frames.size() == 2);
    CHECK(clip.frames[0].root_position.isApprox(Vec3(0, 1, 0), 1e-12));
    // 90 degrees about Z in frame 1.
    const Quat want(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()));
    CHECK(std::abs(clip.frames[1].joint_rotations[0].dot(want)) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wav round-trip and format guards") {
    testutil::TempDir tmp("wav");
    AudioBuffer audio;
    audio.sample_rate = 16000;
    audio.samples.resize(1600);
    for (size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = 0.5 * std::sin(2.0 * M_PI * 440.0 * i / 16000.0);
    }
    const std::string path = tmp.file("tone.wav");
    save_wav(audio, path);
    const AudioBuffer back = load_wav(path);
    CHECK(back.sample_rate == 16000);
    REQUIRE(back.samples.size() == audio.samples.size());
    for (size_t i = 0; i < back.samples.size(); ++i) {
        CHECK(back.samples[i] == doctest::Approx(audio.samples[i]).epsilon(1e-4));
    }

    // Stereo header must be rejected: patch the channel-count field.
    std::string bytes = testutil::read_file(path);
    bytes[22] = 2;
    {
        std::ofstream out(tmp.file("stereo.wav"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_wav(tmp.file("stereo.wav")), FormatError);
    CHECK_THROWS_AS(load_wav(tmp.file("nope.wav")), IoError);
}
