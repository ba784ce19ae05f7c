#include "mograph/optimizer.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"

namespace mograph {

using nlohmann::json;

CostWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weights " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed weights JSON: ") + e.what());
    }
    CostWeights w;
    w.lambda_t = j.value("lambda_t", w.lambda_t);
    w.lambda_s = j.value("lambda_s", w.lambda_s);
    w.lambda_r = j.value("lambda_r", w.lambda_r);
    if (j.contains("missing_edge_penalty") && !j["missing_edge_penalty"].is_null()) {
        w.missing_edge_penalty = j["missing_edge_penalty"].get<double>();
    }
    w.semantic_mismatch_penalty = j.value("semantic_mismatch_penalty", w.semantic_mismatch_penalty);
    if (w.lambda_t < 0 || w.lambda_s < 0 || w.lambda_r < 0 || w.semantic_mismatch_penalty < 0) {
        throw ValueError("cost weights must be non-negative");
    }
    return w;
}

void save_weights(const CostWeights& weights, const std::string& path) {
    json j = {{"lambda_t", weights.lambda_t},
              {"lambda_s", weights.lambda_s},
              {"lambda_r", weights.lambda_r},
              {"semantic_mismatch_penalty", weights.semantic_mismatch_penalty}};
    if (weights.missing_edge_penalty < 0.0) {
        j["missing_edge_penalty"] = nullptr;
    } else {
        j["missing_edge_penalty"] = weights.missing_edge_penalty;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write weights " + path);
    out << j.dump(1) << "\n";
}

void validate_weights(const CostWeights& weights, double sigma, int n_phrases) {
    if (weights.lambda_t < 0 || weights.lambda_s < 0 || weights.lambda_r < 0 ||
        weights.semantic_mismatch_penalty < 0) {
        throw ValueError("cost weights must be non-negative");
    }
    const double pen = weights.resolved_missing_edge_penalty(sigma);
    const double bound = n_phrases * (weights.lambda_t * pen + weights.lambda_r * 2.0);
    if (!(weights.semantic_mismatch_penalty > bound)) {
        throw ValueError("semantic_mismatch_penalty too small to dominate non-semantic costs");
    }
}

std::vector<std::string> candidate_nodes(const MotionGraph& graph, const Phrase& phrase) {
    if (graph.nodes.empty()) throw EmptyGraphError("candidate query on empty graph");
    std::vector<std::string> tagged;
    std::vector<std::string> plain;
    for (const auto& node : graph.nodes) {  // nodes are sorted by segment_id
        if (!node.semantic_tag) {
            plain.push_back(node.segment_id);
        } else if (phrase.semantic_tag && *node.semantic_tag == *phrase.semantic_tag) {
            tagged.push_back(node.segment_id);
        }
    }
    if (phrase.semantic_tag && !tagged.empty()) return tagged;
    return plain;
}

double phrase_cost(const MotionSegment& node, const Phrase& phrase,
                   const RhythmCurve& phrase_rhythm, const CostWeights& weights) {
    if (phrase.semantic_tag) {
        const bool match = node.semantic_tag && *node.semantic_tag == *phrase.semantic_tag;
        return weights.lambda_s * (match ? 0.0 : weights.semantic_mismatch_penalty);
    }
    return weights.lambda_r * rhythm_cost(node.strength, phrase_rhythm);
}

namespace {

// Shared cost tables for the DP and the brute-force oracle, so both see
// bit-identical numbers and exact ties resolve the same way.
class CostTables {
  public:
    CostTables(const MotionGraph& graph, const std::vector<Phrase>& phrases,
               const std::vector<RhythmCurve>& rhythms, const CostWeights& weights)
        : graph_(graph), weights_(weights),
          penalty_(weights.resolved_missing_edge_penalty(graph.sigma)) {
        if (phrases.empty()) throw ValueError("no phrases to assign");
        if (rhythms.size() != phrases.size()) {
            throw LengthMismatchError("need one rhythm curve per phrase");
        }
        for (size_t i = 0; i < graph.nodes.size(); ++i) {
            index_of_[graph.nodes[i].segment_id] = static_cast<int>(i);
        }
        candidates_.resize(phrases.size());
        node_cost_.resize(phrases.size());
        for (size_t i = 0; i < phrases.size(); ++i) {
            for (const auto& id : candidate_nodes(graph, phrases[i])) {
                candidates_[i].push_back(index_of_.at(id));
            }
            if (candidates_[i].empty()) {
                throw EmptyCandidateError("phrase " + std::to_string(phrases[i].index) +
                                          " has no candidate nodes");
            }
            for (int c : candidates_[i]) {
                node_cost_[i].push_back(
                    phrase_cost(graph.nodes[c], phrases[i], rhythms[i], weights_));
            }
        }
    }

    size_t stages() const { return candidates_.size(); }
    const std::vector<int>& candidates(size_t stage) const { return candidates_[stage]; }
    double phrase_term(size_t stage, size_t slot) const { return node_cost_[stage][slot]; }
    const std::string& id_of(int node) const { return graph_.nodes[node].segment_id; }

    double weighted_transition(int from, int to) const {
        return weights_.lambda_t * raw_transition(from, to);
    }

    // Stored edge cost when present, else the recomputed boundary cost
    // plus the missing-edge penalty.
    double raw_transition(int from, int to) const {
        const auto key = std::make_pair(from, to);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        double cost;
        const double* stored = graph_.edge_cost(graph_.nodes[from].segment_id,
                                                graph_.nodes[to].segment_id);
        if (stored) {
            cost = *stored;
        } else {
            cost = transition_cost(graph_.nodes[from], graph_.nodes[to], graph_.params) + penalty_;
        }
        cache_.emplace(key, cost);
        return cost;
    }

  private:
    const MotionGraph& graph_;
    const CostWeights& weights_;
    double penalty_;
    std::map<std::string, int> index_of_;
    std::vector<std::vector<int>> candidates_;
    std::vector<std::vector<double>> node_cost_;
    mutable std::map<std::pair<int, int>, double> cache_;
};

SynthesisPath finish_path(const CostTables& tables, const std::vector<int>& chosen_slots) {
    const size_t n = tables.stages();
    SynthesisPath path;
    path.assignments.resize(n);
    path.per_phrase_costs.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const int node = tables.candidates(i)[chosen_slots[i]];
        path.assignments[i] = tables.id_of(node);
        path.per_phrase_costs[i].semantic_or_rhythm = tables.phrase_term(i, chosen_slots[i]);
        if (i > 0) {
            const int prev = tables.candidates(i - 1)[chosen_slots[i - 1]];
            path.per_phrase_costs[i].transition = tables.weighted_transition(prev, node);
        }
    }
    // Right-to-left accumulation, matching the suffix DP's operation order
    // exactly so brute force and DP report bit-identical totals.
    double acc = path.per_phrase_costs[n - 1].semantic_or_rhythm;
    for (size_t i = n - 1; i > 0; --i) {
        acc = path.per_phrase_costs[i - 1].semantic_or_rhythm +
              (path.per_phrase_costs[i].transition + acc);
    }
    path.total_cost = acc;
    return path;
}

}  // namespace

SynthesisPath synthesize_path(const MotionGraph& graph, const std::vector<Phrase>& phrases,
                              const std::vector<RhythmCurve>& rhythms,
                              const CostWeights& weights) {
    const CostTables tables(graph, phrases, rhythms, weights);
    const size_t n = tables.stages();

    // suffix[i][j]: minimal cost of phrases i.. with phrase i pinned to
    // candidate slot j (phrase term included, transition i->i+1 included).
    std::vector<std::vector<double>> suffix(n);
    suffix[n - 1].assign(tables.candidates(n - 1).size(), 0.0);
    for (size_t j = 0; j < tables.candidates(n - 1).size(); ++j) {
        suffix[n - 1][j] = tables.phrase_term(n - 1, j);
    }
    for (size_t i = n - 1; i > 0; --i) {
        const auto& here = tables.candidates(i - 1);
        const auto& next = tables.candidates(i);
        suffix[i - 1].assign(here.size(), 0.0);
        for (size_t j = 0; j < here.size(); ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < next.size(); ++k) {
                const double v = tables.weighted_transition(here[j], next[k]) + suffix[i][k];
                if (v < best) best = v;
            }
            suffix[i - 1][j] = tables.phrase_term(i - 1, j) + best;
        }
    }

    // Front-to-back reconstruction: at each stage take the first slot (ids
    // ascend) attaining the stage minimum, which yields the
    // lexicographically smallest optimal sequence.
    std::vector<int> slots(n, 0);
    double best0 = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < suffix[0].size(); ++j) {
        if (suffix[0][j] < best0) {
            best0 = suffix[0][j];
            slots[0] = static_cast<int>(j);
        }
    }
    for (size_t i = 1; i < n; ++i) {
        const int prev = tables.candidates(i - 1)[slots[i - 1]];
        double best = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < tables.candidates(i).size(); ++k) {
            const double v = tables.weighted_transition(prev, tables.candidates(i)[k]) +
                             suffix[i][k];
            if (v < best) {
                best = v;
                slots[i] = static_cast<int>(k);
            }
        }
    }
    return finish_path(tables, slots);
}

SynthesisPath brute_force_path(const MotionGraph& graph, const std::vector<Phrase>& phrases,
                               const std::vector<RhythmCurve>& rhythms,
                               const CostWeights& weights) {
    const CostTables tables(graph, phrases, rhythms, weights);
    const size_t n = tables.stages();

    double combos = 1.0;
    for (size_t i = 0; i < n; ++i) combos *= static_cast<double>(tables.candidates(i).size());
    if (combos > 1e6) throw TooLargeError("assignment space exceeds 1e6 combinations");

    std::vector<int> slots(n, 0);
    std::vector<int> best_slots;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        // Same right-to-left accumulation as the DP (see finish_path).
        double acc = tables.phrase_term(n - 1, slots[n - 1]);
        for (size_t i = n - 1; i > 0; --i) {
            const int from = tables.candidates(i - 1)[slots[i - 1]];
            const int to = tables.candidates(i)[slots[i]];
            acc = tables.phrase_term(i - 1, slots[i - 1]) +
                  (tables.weighted_transition(from, to) + acc);
        }
        if (acc < best) {  // enumeration is lexicographic, so ties keep the earlier path
            best = acc;
            best_slots = slots;
        }
        size_t digit = n;
        while (digit > 0) {
            --digit;
            if (++slots[digit] < static_cast<int>(tables.candidates(digit).size())) break;
            slots[digit] = 0;
            if (digit == 0) return finish_path(tables, best_slots);
        }
    }
}

void save_path(const SynthesisPath& path, const std::string& file) {
    json parts = json::array();
    for (const auto& p : path.per_phrase_costs) {
        parts.push_back({{"transition", p.transition}, {"semantic_or_rhythm", p.semantic_or_rhythm}});
    }
    json j = {{"assignments", path.assignments},
              {"total_cost", path.total_cost},
              {"per_phrase_costs", std::move(parts)}};
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write path " + file);
    out << j.dump(1) << "\n";
}

SynthesisPath load_path(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open path " + file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed path JSON: ") + e.what());
    }
    SynthesisPath path;
    path.assignments = j.at("assignments").get<std::vector<std::string>>();
    path.total_cost = j.at("total_cost").get<double>();
    for (const auto& jp : j.at("per_phrase_costs")) {
        path.per_phrase_costs.push_back(
            {jp.at("transition").get<double>(), jp.at("semantic_or_rhythm").get<double>()});
    }
    if (path.per_phrase_costs.size() != path.assignments.size()) {
        throw SchemaError("path costs and assignments disagree in length");
    }
    return path;
}

}  // namespace mograph
