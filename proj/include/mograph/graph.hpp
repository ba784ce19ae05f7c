#pragma once

#include <map>
#include <string>
#include <vector>

#include "mograph/segmentation.hpp"

namespace mograph {

struct TransitionParams {
    double velocity_weight = 0.5;  // beta, seconds; converts m/s gaps to meters
    int boundary_window = 3;       // frames used for boundary velocity estimates
    bool align_root = true;

    bool operator==(const TransitionParams&) const = default;
};

struct GraphEdge {
    std::string from;
    std::string to;
    double cost = 0.0;

    bool operator==(const GraphEdge&) const = default;
};

/// Directed motion graph. Nodes are kept sorted by segment_id and edges by
/// (from, to); the structure is immutable once built.
struct MotionGraph {
    std::vector<MotionSegment> nodes;
    std::vector<GraphEdge> edges;
    double sigma = 0.0;
    TransitionParams params;

    const MotionSegment* find_node(const std::string& segment_id) const;
    const MotionSegment& node_or_throw(const std::string& segment_id) const;

    /// Edge cost lookup; nullptr when the pair has no stored edge.
    const double* edge_cost(const std::string& from, const std::string& to) const;

    bool operator==(const MotionGraph& other) const;

private:
    mutable std::map<std::pair<std::string, std::string>, double> edge_index_;
    mutable bool edge_index_built_ = false;
    void ensure_edge_index() const;
};

/// Boundary pose/velocity discrepancy between the end of `a` and the start
/// of `b`. With align_root, b is first rigidly moved so its first-frame root
/// matches a's last-frame root on the ground plane and in yaw. The cost is
///   mean_salient ||p_a - p_b|| + beta * mean_salient ||v_a - v_b||
/// with boundary_window finite-difference velocities. Not symmetric.
double transition_cost(const MotionSegment& a, const MotionSegment& b,
                       const TransitionParams& params);

/// Thresholded all-pairs construction: an ordered pair gets an edge iff its
/// transition cost is below sigma. Temporally consecutive segments of one
/// source clip always get a zero-cost continuation edge. Self-pairs are
/// considered only when the segment spans >= 2 * boundary_window frames.
MotionGraph build_graph(const std::vector<MotionSegment>& segments, double sigma,
                        const TransitionParams& params);

/// 20th percentile of all candidate pairwise costs; used for sigma = "auto".
double auto_sigma(const std::vector<MotionSegment>& segments, const TransitionParams& params);

void save_graph(const MotionGraph& graph, const std::string& path);
MotionGraph load_graph(const std::string& path);

}  // namespace mograph
