#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mograph/errors.hpp"
#include "mograph/graph.hpp"

using namespace mograph;

namespace {

// Root translates along +X at `speed` m/s with identity rotations.
MotionClip moving_clip(const Skeleton& skel, const Vec3& start, double speed, int frames,
                       const std::string& source_id, double fps = 25.0) {
    MotionClip clip = testutil::static_clip(skel, start, frames, source_id, fps);
    for (int f = 0; f < frames; ++f) {
        clip.frames[f].root_position = start + Vec3(speed * f / fps, 0.0, 0.0);
    }
    return clip;
}

// Rigid ground-plane motion: yaw about +Y plus an XZ translation.
MotionClip ground_transformed(const MotionClip& clip, double yaw, const Vec3& xz_offset) {
    const Quat rot(Eigen::AngleAxisd(yaw, Vec3::UnitY()));
    MotionClip out = clip;
    for (auto& frame : out.frames) {
        frame.root_position = rot * frame.root_position + xz_offset;
        frame.joint_rotations[0] = (rot * frame.joint_rotations[0]).normalized();
    }
    return out;
}

}  // namespace

TEST_CASE("transition cost: identical static boundaries cost nothing") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 0.9, 0), 8, "a"), "a");
    const auto b = testutil::wrap_segment(testutil::static_clip(skel, Vec3(4, 0.9, 7), 8, "b"), "b");
    // Ground-plane alignment removes the XZ offset entirely.
    CHECK(transition_cost(a, b, {}) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("transition cost: vertical offsets are not aligned away") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 0.9, 0), 8, "a"), "a");
    const auto b = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1.2, 0), 8, "b"), "b");
    // Both salient joints sit 0.3 m higher; velocities are zero.
    CHECK(transition_cost(a, b, {}) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("transition cost: velocity mismatch is weighted by velocity_weight") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto still = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 8, "a"), "a");
    // 1 m/s along +X; every salient joint carries the same velocity.
    const auto rolling = testutil::wrap_segment(moving_clip(skel, Vec3(2, 1, 5), 1.0, 8, "b"), "b");
    CHECK(transition_cost(still, rolling, {}) == doctest::Approx(0.5).epsilon(1e-12));

    TransitionParams heavier;
    heavier.velocity_weight = 2.0;
    CHECK(transition_cost(still, rolling, heavier) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("transition cost: constant-speed clip continues into itself for free") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto seg = testutil::wrap_segment(moving_clip(skel, Vec3(0, 1, 0), 1.3, 10, "m"), "m");
    CHECK(transition_cost(seg, seg, {}) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
}

TEST_CASE("transition cost: invariant to ground-plane placement of either segment") {
    Skeleton skel = testutil::two_joint_skeleton();
    MotionClip a = moving_clip(skel, Vec3(0, 1, 0), 0.8, 12, "a");
    MotionClip b = moving_clip(skel, Vec3(0.3, 1.1, -0.2), 1.4, 12, "b");
    // Give b some root yaw motion so the test exercises orientation too.
    for (int f = 0; f < b.frame_count(); ++f) {
        b.frames[f].joint_rotations[0] =
            Quat(Eigen::AngleAxisd(0.05 * f, Vec3::UnitY())).normalized();
    }
    const auto seg_a = testutil::wrap_segment(a, "a");
    const auto seg_b = testutil::wrap_segment(b, "b");
    const double base = transition_cost(seg_a, seg_b, {});
    CHECK(base > 0.0);

    const auto seg_b_moved =
        testutil::wrap_segment(ground_transformed(b, 1.1, Vec3(2.0, 0.0, -3.0)), "b");
    CHECK(transition_cost(seg_a, seg_b_moved, {}) == doctest::Approx(base).epsilon(1e-9));

    const auto seg_a_moved =
        testutil::wrap_segment(ground_transformed(a, -0.7, Vec3(-5.0, 0.0, 1.5)), "a");
    CHECK(transition_cost(seg_a_moved, seg_b, {}) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("transition cost: alignment can be disabled") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 8, "a"), "a");
    const auto b = testutil::wrap_segment(testutil::static_clip(skel, Vec3(2, 1, 0), 8, "b"), "b");
    TransitionParams no_align;
    no_align.align_root = false;
    CHECK(transition_cost(a, b, {}) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(transition_cost(a, b, no_align) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("transition cost: skeleton mismatch is an error") {
    const Skeleton skel = testutil::two_joint_skeleton();
    Skeleton other = skel;
    other.joints[1].offset = Vec3(0.6, 0, 0);
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 8, "a"), "a");
    const auto b = testutil::wrap_segment(testutil::static_clip(other, Vec3(0, 1, 0), 8, "b"), "b");
    CHECK_THROWS_AS(transition_cost(a, b, {}), SkeletonMismatchError);
}

TEST_CASE("build_graph keeps pairs strictly below sigma") {
    const Skeleton skel = testutil::two_joint_skeleton();
    // Static clips at heights 0 / 1 / 4: ordered-pair costs are exactly
    // {1,1,3,3,4,4}. Five frames keeps self-pairs out (< 2 * boundary_window).
    std::vector<MotionSegment> segs = {
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 0, 0), 5, "h0"), "h0"),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "h1"), "h1"),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 4, 0), 5, "h4"), "h4"),
    };

    const MotionGraph tight = build_graph(segs, 1.0, {});
    CHECK(tight.edges.empty());  // cost == sigma does not qualify

    const MotionGraph loose = build_graph(segs, 1.5, {});
    REQUIRE(loose.edges.size() == 2);
    CHECK(loose.edge_cost("h0", "h1") != nullptr);
    CHECK(loose.edge_cost("h1", "h0") != nullptr);
    CHECK(*loose.edge_cost("h0", "h1") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(loose.edge_cost("h0", "h4") == nullptr);
    for (const auto& e : loose.edges) CHECK(e.cost < loose.sigma);
}

TEST_CASE("build_graph gates self-loops on segment length") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto short_seg =
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "s"), "s");
    const auto long_seg =
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 6, "l"), "l");

    const MotionGraph g_short = build_graph({short_seg}, 0.5, {});
    CHECK(g_short.edge_cost("s", "s") == nullptr);

    const MotionGraph g_long = build_graph({long_seg}, 0.5, {});
    REQUIRE(g_long.edge_cost("l", "l") != nullptr);
    CHECK(*g_long.edge_cost("l", "l") == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("build_graph always links natural continuations at zero cost") {
    const Skeleton skel = testutil::two_joint_skeleton();
    // A jump discontinuity at the cut keeps the pair expensive, yet the
    // continuation edge must exist with cost 0.
    MotionClip clip = testutil::static_clip(skel, Vec3(0, 0, 0), 12, "src");
    for (int f = 6; f < 12; ++f) clip.frames[f].root_position = Vec3(0, 9, 0);
    const StrengthCurve ones{std::vector<double>(12, 1.0), 25.0, Normalization::unit_max};
    const auto segs = segment_clip(clip, {6}, ones);
    REQUIRE(segs.size() == 2);

    const MotionGraph graph = build_graph(segs, 0.5, {});
    const double* cont = graph.edge_cost("src#0", "src#6");
    REQUIRE(cont != nullptr);
    CHECK(*cont == 0.0);
    // The reverse direction is not a continuation and the jump is way over sigma.
    CHECK(graph.edge_cost("src#6", "src#0") == nullptr);
}

TEST_CASE("build_graph input validation") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "a"), "a");
    CHECK_THROWS_AS(build_graph({}, 1.0, {}), EmptyGraphError);
    CHECK_THROWS_AS(build_graph({a, a}, 1.0, {}), ValueError);
    CHECK_THROWS_AS(build_graph({a}, -1.0, {}), ValueError);

    Skeleton other = skel;
    other.joints[1].offset = Vec3(0.7, 0, 0);
    const auto b = testutil::wrap_segment(testutil::static_clip(other, Vec3(0, 1, 0), 5, "b"), "b");
    CHECK_THROWS_AS(build_graph({a, b}, 1.0, {}), SkeletonMismatchError);
}

TEST_CASE("auto_sigma interpolates the 20th percentile of pair costs") {
    const Skeleton skel = testutil::two_joint_skeleton();
    std::vector<MotionSegment> segs = {
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 0, 0), 5, "h0"), "h0"),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "h1"), "h1"),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 4, 0), 5, "h4"), "h4"),
    };
    // Sorted pair costs {1,1,3,3,4,4}: rank 0.2*(6-1) = 1.0 lands on the
    // second element exactly.
    CHECK(auto_sigma(segs, {}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("auto_sigma falls back when there is nothing to measure") {
    const Skeleton skel = testutil::two_joint_skeleton();
    // One short segment: no self-pair, no other pair.
    const auto only = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "x"), "x");
    CHECK(auto_sigma({only}, {}) == doctest::Approx(1.0));

    // All-identical boundaries give p20 = 0; the floor keeps sigma positive.
    std::vector<MotionSegment> same = {
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "a"), "a"),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "b"), "b"),
    };
    CHECK(auto_sigma(same, {}) == doctest::Approx(1e-3));
    CHECK_THROWS_AS(auto_sigma({}, {}), EmptyGraphError);
}

TEST_CASE("graph lookup helpers") {
    const Skeleton skel = testutil::two_joint_skeleton();
    const auto a = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "a"), "a");
    const auto b = testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 5, "b"), "b");
    const MotionGraph graph = build_graph({b, a}, 0.5, {});

    REQUIRE(graph.nodes.size() == 2);
    CHECK(graph.nodes[0].segment_id == "a");  // sorted on build
    CHECK(graph.find_node("b") != nullptr);
    CHECK(graph.find_node("zzz") == nullptr);
    CHECK(graph.node_or_throw("a").segment_id == "a");
    CHECK_THROWS_AS(graph.node_or_throw("zzz"), PathGraphMismatchError);
}

TEST_CASE("graph persistence round-trips exactly") {
    const Skeleton skel = testutil::two_joint_skeleton();
    MotionClip wave = moving_clip(skel, Vec3(0, 1, 0), 0.7, 8, "wave");
    std::vector<MotionSegment> segs = {
        testutil::wrap_segment(wave, "wave", {0.1, 0.4, 1.0, 0.9, 0.8, 0.5, 0.3, 0.2}),
        testutil::wrap_segment(testutil::static_clip(skel, Vec3(0, 1, 0), 6, "idle"), "idle"),
    };
    segs[0].semantic_tag = "left";

    const MotionGraph graph = build_graph(segs, 2.5, {});
    testutil::TempDir tmp("graph_io");
    const std::string path = tmp.file("graph.json");
    save_graph(graph, path);
    const MotionGraph loaded = load_graph(path);
    CHECK(loaded == graph);
    CHECK(loaded.node_or_throw("wave").semantic_tag == std::optional<std::string>("left"));
}

TEST_CASE("graph persistence rejects bad files") {
    testutil::TempDir tmp("graph_bad");
    CHECK_THROWS_AS(load_graph(tmp.file("missing.json")), IoError);

    {
        std::ofstream out(tmp.file("garbage.json"));
        out << "{not json";
    }
    CHECK_THROWS_AS(load_graph(tmp.file("garbage.json")), ParseError);

    {
        std::ofstream out(tmp.file("no_version.json"));
        out << R"({"sigma": 1.0})";
    }
    CHECK_THROWS_AS(load_graph(tmp.file("no_version.json")), SchemaError);

    {
        std::ofstream out(tmp.file("future.json"));
        out << R"({"version": "99", "sigma": 1.0, "params": {}, "nodes": [], "edges": []})";
    }
    CHECK_THROWS_AS(load_graph(tmp.file("future.json")), VersionError);
}
