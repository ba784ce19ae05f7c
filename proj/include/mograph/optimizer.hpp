#pragma once

#include <string>
#include <vector>

#include "mograph/graph.hpp"
#include "mograph/phrases.hpp"
#include "mograph/rhythm.hpp"

namespace mograph {

struct CostWeights {
    double lambda_t = 1.0;   // transition term
    double lambda_s = 10.0;  // semantic term
    double lambda_r = 1.0;   // rhythm term
    // Cost added on top of a recomputed transition when the graph has no
    // stored edge. Negative means "auto": resolved to 10 * graph.sigma.
    double missing_edge_penalty = -1.0;
    double semantic_mismatch_penalty = 1e6;  // M

    double resolved_missing_edge_penalty(double sigma) const {
        return missing_edge_penalty < 0.0 ? 10.0 * sigma : missing_edge_penalty;
    }
    bool operator==(const CostWeights& other) const = default;
};

CostWeights load_weights(const std::string& path);
void save_weights(const CostWeights& weights, const std::string& path);

// M must dominate any achievable non-semantic path cost, otherwise the
// mismatch penalty cannot enforce semantic assignments.
void validate_weights(const CostWeights& weights, double sigma, int n_phrases);

struct PhraseCostParts {
    double transition = 0.0;          // weighted cost of the transition into this phrase
    double semantic_or_rhythm = 0.0;  // weighted per-phrase cost
    bool operator==(const PhraseCostParts& other) const = default;
};

struct SynthesisPath {
    std::vector<std::string> assignments;  // one segment_id per phrase
    double total_cost = 0.0;
    std::vector<PhraseCostParts> per_phrase_costs;
};

// Tagged phrase: nodes with the same tag, falling back to all non-semantic
// nodes when no tag matches. Untagged phrase: all non-semantic nodes.
// Sorted by segment_id.
std::vector<std::string> candidate_nodes(const MotionGraph& graph, const Phrase& phrase);

double phrase_cost(const MotionSegment& node, const Phrase& phrase,
                   const RhythmCurve& phrase_rhythm, const CostWeights& weights);

// Exact minimizer of  lambda_t * sum of transition costs  +  sum of phrase
// costs  over one-node-per-phrase assignments, by stagewise dynamic
// programming. Ties break toward the lexicographically smaller segment_id
// sequence. Missing edges cost a recomputed transition plus the penalty.
SynthesisPath synthesize_path(const MotionGraph& graph, const std::vector<Phrase>& phrases,
                              const std::vector<RhythmCurve>& rhythms, const CostWeights& weights);

// Exhaustive oracle with the identical cost definition and tie-break.
// Refuses instances with more than 1e6 assignment combinations.
SynthesisPath brute_force_path(const MotionGraph& graph, const std::vector<Phrase>& phrases,
                               const std::vector<RhythmCurve>& rhythms,
                               const CostWeights& weights);

void save_path(const SynthesisPath& path, const std::string& file);
SynthesisPath load_path(const std::string& file);

}  // namespace mograph
