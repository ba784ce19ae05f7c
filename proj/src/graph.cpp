#include "mograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"

namespace mograph {

using nlohmann::json;

namespace {

// Pose and velocity of the salient joints at one end of a segment, with the
// root's ground-plane position and yaw for alignment.
struct BoundaryState {
    std::vector<Vec3> positions;   // salient joints only
    std::vector<Vec3> velocities;  // salient joints only, m/s
    Vec3 root_position = Vec3::Zero();
    double yaw = 0.0;
};

double yaw_of(const Quat& q) {
    const Vec3 fwd = q * Vec3::UnitZ();
    if (fwd.x() * fwd.x() + fwd.z() * fwd.z() > 1e-12) return std::atan2(fwd.x(), fwd.z());
    const Vec3 side = q * Vec3::UnitX();  // forward is vertical, fall back to the side axis
    return -std::atan2(side.z(), side.x());
}

BoundaryState boundary_state(const MotionSegment& seg, bool at_end, int boundary_window) {
    const MotionClip& clip = seg.clip;
    const int n = clip.frame_count();
    const int edge = at_end ? n - 1 : 0;
    const int w = std::min(boundary_window, n - 1);
    const int other = at_end ? edge - w : edge + w;

    const std::vector<int> salient = clip.skeleton.salient_indices();
    const std::vector<Vec3> p_edge = forward_kinematics(clip, edge);
    const std::vector<Vec3> p_other = w > 0 ? forward_kinematics(clip, other) : p_edge;

    BoundaryState state;
    state.positions.reserve(salient.size());
    state.velocities.reserve(salient.size());
    const double dt = w > 0 ? w / clip.fps : 1.0;
    for (int j : salient) {
        state.positions.push_back(p_edge[j]);
        Vec3 v = Vec3::Zero();
        if (w > 0) v = at_end ? (p_edge[j] - p_other[j]) / dt : (p_other[j] - p_edge[j]) / dt;
        state.velocities.push_back(v);
    }
    const MotionFrame& frame = clip.frames[edge];
    state.root_position = frame.root_position;
    int root = 0;
    for (size_t i = 0; i < clip.skeleton.joints.size(); ++i) {
        if (clip.skeleton.joints[i].parent < 0) root = static_cast<int>(i);
    }
    state.yaw = yaw_of(frame.joint_rotations[root]);
    return state;
}

double cost_between(const BoundaryState& end_a, const BoundaryState& start_b,
                    const TransitionParams& params) {
    if (end_a.positions.size() != start_b.positions.size()) {
        throw SkeletonMismatchError("segments disagree on salient joint count");
    }
    if (end_a.positions.empty()) return 0.0;

    // Rigidly carry b onto a: yaw about +Y, then a ground-plane translation.
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    Vec3 trans = Vec3::Zero();
    if (params.align_root) {
        const double dyaw = end_a.yaw - start_b.yaw;
        rot = Eigen::AngleAxisd(dyaw, Vec3::UnitY()).toRotationMatrix();
        const Vec3 b_root = rot * start_b.root_position;
        trans = Vec3(end_a.root_position.x() - b_root.x(), 0.0,
                     end_a.root_position.z() - b_root.z());
    }

    double pos_sum = 0.0;
    double vel_sum = 0.0;
    for (size_t j = 0; j < end_a.positions.size(); ++j) {
        const Vec3 pb = rot * start_b.positions[j] + trans;
        const Vec3 vb = rot * start_b.velocities[j];
        pos_sum += (end_a.positions[j] - pb).norm();
        vel_sum += (end_a.velocities[j] - vb).norm();
    }
    const double k = static_cast<double>(end_a.positions.size());
    return pos_sum / k + params.velocity_weight * vel_sum / k;
}

}  // namespace

double transition_cost(const MotionSegment& a, const MotionSegment& b,
                       const TransitionParams& params) {
    if (!(a.clip.skeleton == b.clip.skeleton)) {
        throw SkeletonMismatchError("transition between segments with different skeletons");
    }
    return cost_between(boundary_state(a, true, params.boundary_window),
                        boundary_state(b, false, params.boundary_window), params);
}

const MotionSegment* MotionGraph::find_node(const std::string& segment_id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), segment_id,
                               [](const MotionSegment& s, const std::string& id) {
                                   return s.segment_id < id;
                               });
    if (it != nodes.end() && it->segment_id == segment_id) return &*it;
    return nullptr;
}

const MotionSegment& MotionGraph::node_or_throw(const std::string& segment_id) const {
    const MotionSegment* node = find_node(segment_id);
    if (!node) throw PathGraphMismatchError("segment '" + segment_id + "' not in graph");
    return *node;
}

void MotionGraph::ensure_edge_index() const {
    if (edge_index_built_) return;
    for (const auto& e : edges) edge_index_[{e.from, e.to}] = e.cost;
    edge_index_built_ = true;
}

const double* MotionGraph::edge_cost(const std::string& from, const std::string& to) const {
    ensure_edge_index();
    auto it = edge_index_.find({from, to});
    return it == edge_index_.end() ? nullptr : &it->second;
}

bool MotionGraph::operator==(const MotionGraph& other) const {
    return nodes == other.nodes && edges == other.edges && sigma == other.sigma &&
           params == other.params;
}

namespace {

bool naturally_continues(const MotionSegment& a, const MotionSegment& b) {
    return a.source_id == b.source_id && a.end_frame == b.start_frame;
}

std::vector<MotionSegment> sorted_by_id(std::vector<MotionSegment> segments) {
    std::sort(segments.begin(), segments.end(),
              [](const MotionSegment& a, const MotionSegment& b) {
                  return a.segment_id < b.segment_id;
              });
    for (size_t i = 0; i + 1 < segments.size(); ++i) {
        if (segments[i].segment_id == segments[i + 1].segment_id) {
            throw ValueError("duplicate segment_id '" + segments[i].segment_id + "'");
        }
    }
    return segments;
}

}  // namespace

MotionGraph build_graph(const std::vector<MotionSegment>& segments, double sigma,
                        const TransitionParams& params) {
    if (segments.empty()) throw EmptyGraphError("cannot build a graph from zero segments");
    if (!(sigma >= 0.0)) throw ValueError("sigma must be non-negative");

    MotionGraph graph;
    graph.nodes = sorted_by_id(segments);
    graph.sigma = sigma;
    graph.params = params;

    const size_t k = graph.nodes.size();
    std::vector<BoundaryState> ends(k);
    std::vector<BoundaryState> starts(k);
    for (size_t i = 0; i < k; ++i) {
        if (!(graph.nodes[i].clip.skeleton == graph.nodes[0].clip.skeleton)) {
            throw SkeletonMismatchError("all graph segments must share one skeleton");
        }
        ends[i] = boundary_state(graph.nodes[i], true, params.boundary_window);
        starts[i] = boundary_state(graph.nodes[i], false, params.boundary_window);
    }

    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            const bool self_pair = i == j;
            if (self_pair && graph.nodes[i].frame_count() < 2 * params.boundary_window) continue;
            if (naturally_continues(graph.nodes[i], graph.nodes[j])) {
                graph.edges.push_back({graph.nodes[i].segment_id, graph.nodes[j].segment_id, 0.0});
                continue;
            }
            const double cost = cost_between(ends[i], starts[j], params);
            if (cost < sigma) {
                graph.edges.push_back({graph.nodes[i].segment_id, graph.nodes[j].segment_id, cost});
            }
        }
    }
    return graph;
}

double auto_sigma(const std::vector<MotionSegment>& segments, const TransitionParams& params) {
    if (segments.empty()) throw EmptyGraphError("cannot calibrate sigma on zero segments");
    std::vector<MotionSegment> nodes = sorted_by_id(segments);
    const size_t k = nodes.size();
    std::vector<BoundaryState> ends(k);
    std::vector<BoundaryState> starts(k);
    for (size_t i = 0; i < k; ++i) {
        ends[i] = boundary_state(nodes[i], true, params.boundary_window);
        starts[i] = boundary_state(nodes[i], false, params.boundary_window);
    }
    std::vector<double> costs;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            if (i == j && nodes[i].frame_count() < 2 * params.boundary_window) continue;
            if (naturally_continues(nodes[i], nodes[j])) continue;
            costs.push_back(cost_between(ends[i], starts[j], params));
        }
    }
    if (costs.empty()) return 1.0;
    std::sort(costs.begin(), costs.end());
    const double rank = 0.20 * (costs.size() - 1);
    const size_t lo = static_cast<size_t>(rank);
    const double frac = rank - lo;
    const double p20 = lo + 1 < costs.size() ? costs[lo] * (1.0 - frac) + costs[lo + 1] * frac
                                             : costs[lo];
    return p20 > 0.0 ? p20 : 1e-3;
}

// --- persistence ---------------------------------------------------------

namespace {

constexpr const char* kGraphVersion = "1";

json strength_to_json(const StrengthCurve& c) {
    return {{"values", c.values},
            {"fps", c.fps},
            {"normalization", c.normalization == Normalization::unit_max ? "unit_max" : "raw"}};
}

StrengthCurve strength_from_json(const json& j) {
    StrengthCurve c;
    c.values = j.at("values").get<std::vector<double>>();
    c.fps = j.at("fps").get<double>();
    c.normalization = j.at("normalization").get<std::string>() == "unit_max"
                          ? Normalization::unit_max
                          : Normalization::raw;
    return c;
}

json skeleton_to_json(const Skeleton& s) {
    json joints = json::array();
    for (const auto& j : s.joints) {
        json jj = {{"name", j.name}, {"offset", {j.offset.x(), j.offset.y(), j.offset.z()}}};
        if (j.parent < 0) jj["parent"] = nullptr; else jj["parent"] = j.parent;
        joints.push_back(std::move(jj));
    }
    return {{"joints", std::move(joints)}, {"salient", s.salient_joint_names}};
}

Skeleton skeleton_from_json(const json& js) {
    Skeleton s;
    for (const auto& jj : js.at("joints")) {
        Joint joint;
        joint.name = jj.at("name").get<std::string>();
        joint.parent = jj.at("parent").is_null() ? -1 : jj.at("parent").get<int>();
        const auto off = jj.at("offset");
        joint.offset = Vec3(off[0].get<double>(), off[1].get<double>(), off[2].get<double>());
        s.joints.push_back(std::move(joint));
    }
    s.salient_joint_names = js.at("salient").get<std::vector<std::string>>();
    return s;
}

json frames_to_json(const std::vector<MotionFrame>& frames) {
    json out = json::array();
    for (const auto& f : frames) {
        json rotations = json::array();
        for (const auto& q : f.joint_rotations) rotations.push_back({q.w(), q.x(), q.y(), q.z()});
        out.push_back({{"root_pos", {f.root_position.x(), f.root_position.y(), f.root_position.z()}},
                       {"rotations", std::move(rotations)}});
    }
    return out;
}

std::vector<MotionFrame> frames_from_json(const json& jframes) {
    std::vector<MotionFrame> frames;
    for (const auto& jf : jframes) {
        MotionFrame f;
        const auto& rp = jf.at("root_pos");
        f.root_position = Vec3(rp[0].get<double>(), rp[1].get<double>(), rp[2].get<double>());
        for (const auto& jq : jf.at("rotations")) {
            f.joint_rotations.emplace_back(jq[0].get<double>(), jq[1].get<double>(),
                                           jq[2].get<double>(), jq[3].get<double>());
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace

void save_graph(const MotionGraph& graph, const std::string& path) {
    json jnodes = json::array();
    for (const auto& seg : graph.nodes) {
        json jn = {{"segment_id", seg.segment_id},
                   {"source_id", seg.source_id},
                   {"source_range", {seg.start_frame, seg.end_frame}},
                   {"fps", seg.clip.fps},
                   {"strength", strength_to_json(seg.strength)},
                   {"frames", frames_to_json(seg.clip.frames)}};
        if (seg.semantic_tag) jn["semantic_tag"] = *seg.semantic_tag;
        jnodes.push_back(std::move(jn));
    }
    json jedges = json::array();
    for (const auto& e : graph.edges) {
        jedges.push_back({{"from", e.from}, {"to", e.to}, {"cost", e.cost}});
    }
    json root = {{"version", kGraphVersion},
                 {"sigma", graph.sigma},
                 {"params",
                  {{"velocity_weight", graph.params.velocity_weight},
                   {"boundary_window", graph.params.boundary_window},
                   {"align_root", graph.params.align_root}}},
                 {"skeleton", graph.nodes.empty() ? json(nullptr)
                                                  : skeleton_to_json(graph.nodes[0].clip.skeleton)},
                 {"nodes", std::move(jnodes)},
                 {"edges", std::move(jedges)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write graph " + path);
    out << root.dump(1) << "\n";
}

MotionGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open graph " + path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed graph JSON: ") + e.what());
    }
    if (!root.contains("version") || !root["version"].is_string()) {
        throw SchemaError("graph file has no version");
    }
    if (root["version"].get<std::string>() != kGraphVersion) {
        throw VersionError("unsupported graph version '" + root["version"].get<std::string>() + "'");
    }

    MotionGraph graph;
    graph.sigma = root.at("sigma").get<double>();
    const json& jp = root.at("params");
    graph.params.velocity_weight = jp.at("velocity_weight").get<double>();
    graph.params.boundary_window = jp.at("boundary_window").get<int>();
    graph.params.align_root = jp.at("align_root").get<bool>();

    Skeleton skeleton;
    if (!root.at("skeleton").is_null()) skeleton = skeleton_from_json(root["skeleton"]);

    for (const auto& jn : root.at("nodes")) {
        MotionSegment seg;
        seg.segment_id = jn.at("segment_id").get<std::string>();
        seg.source_id = jn.at("source_id").get<std::string>();
        seg.start_frame = jn.at("source_range")[0].get<int>();
        seg.end_frame = jn.at("source_range")[1].get<int>();
        seg.strength = strength_from_json(jn.at("strength"));
        seg.clip.skeleton = skeleton;
        seg.clip.fps = jn.at("fps").get<double>();
        seg.clip.source_id = seg.source_id;
        seg.clip.frames = frames_from_json(jn.at("frames"));
        if (jn.contains("semantic_tag")) seg.semantic_tag = jn["semantic_tag"].get<std::string>();
        graph.nodes.push_back(std::move(seg));
    }
    for (const auto& je : root.at("edges")) {
        graph.edges.push_back(
            {je.at("from").get<std::string>(), je.at("to").get<std::string>(), je.at("cost").get<double>()});
    }
    return graph;
}

}  // namespace mograph
