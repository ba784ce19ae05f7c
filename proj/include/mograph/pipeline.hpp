#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mograph/graph.hpp"
#include "mograph/optimizer.hpp"
#include "mograph/phrases.hpp"
#include "mograph/rhythm.hpp"
#include "mograph/segmentation.hpp"
#include "mograph/stitcher.hpp"

namespace mograph {

struct SigmaPolicy {
    bool automatic = true;
    double value = 1.0;  // ignored when automatic
};

// All paths are resolved against the directory containing the config file.
struct PipelineConfig {
    std::string database_dir;
    std::string semantic_manifest;  // empty: no tagged clips
    std::string lexicon;            // empty: built-in default lexicon
    std::string script;
    std::string wav;
    double hop_seconds = 0.02;
    double max_gap_seconds = 0.35;
    SigmaPolicy sigma_policy;
    CostWeights weights;
    StitchParams stitch;
    std::uint32_t random_seed = 0;
};

PipelineConfig load_config(const std::string& path);

// Every *.json / *.bvh clip under database_dir, manifest-listed clips
// ingested whole with their tags, the rest auto-segmented at strength
// minima. Deterministic order (sorted file names).
std::vector<MotionSegment> load_database(const std::string& database_dir,
                                         const std::string& manifest_path,
                                         const SemanticLexicon& lexicon);

struct AnalysisResult {
    std::vector<Phrase> phrases;
    RhythmCurve envelope;                     // whole-signal onset strength
    std::vector<RhythmCurve> phrase_rhythms;  // one slice per phrase
};

AnalysisResult analyze_speech(const std::string& wav_path, const std::string& script_path,
                              const SemanticLexicon& lexicon, double hop_seconds,
                              double max_gap_seconds);
void save_analysis(const AnalysisResult& analysis, const std::string& path);
AnalysisResult load_analysis(const std::string& path);

// Graph construction is the O(k^2) hot spot, so built graphs are cached in
// cache_dir keyed by a content hash of the database, sigma policy, and
// transition parameters. cache_hit reports whether the cache was used.
MotionGraph build_or_load_graph(const PipelineConfig& config, const std::string& cache_dir,
                                bool* cache_hit = nullptr);

struct RunResult {
    std::string motion_path;
    std::string report_path;
    SynthesisPath path;
};

// analyze -> build-graph (cached) -> synthesize -> render-path. Writes
// motion.json and report.json under out_dir; both are byte-identical
// across runs for the same inputs. Stage timings go to stderr only.
RunResult run_pipeline(const PipelineConfig& config, const std::string& out_dir);

}  // namespace mograph
