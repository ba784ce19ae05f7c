#include "mograph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"
#include "mograph/motion_io.hpp"
#include "mograph/wav.hpp"

namespace mograph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    const auto begin = std::chrono::steady_clock::now();
    try {
        auto result = f();
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - begin;
        std::fprintf(stderr, "[timing] %s: %.3f s\n", name, took.count());
        return result;
    } catch (Error& e) {
        e.set_stage(name);
        throw;
    }
}

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    const fs::path path(p);
    return path.is_absolute() ? path.string() : (base / path).string();
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed config JSON: ") + e.what());
    }

    const fs::path base = fs::path(path).parent_path();
    PipelineConfig config;
    config.database_dir = resolve(base, j.at("database_dir").get<std::string>());
    config.semantic_manifest = resolve(base, j.value("semantic_manifest", std::string()));
    config.lexicon = resolve(base, j.value("lexicon", std::string()));
    config.script = resolve(base, j.at("script").get<std::string>());
    config.wav = resolve(base, j.at("wav").get<std::string>());
    config.hop_seconds = j.value("hop_seconds", config.hop_seconds);
    config.max_gap_seconds = j.value("max_gap_seconds", config.max_gap_seconds);
    config.random_seed = j.value("random_seed", config.random_seed);

    if (j.contains("sigma_policy")) {
        const json& sp = j["sigma_policy"];
        const std::string mode = sp.value("mode", "auto");
        if (mode == "auto") {
            config.sigma_policy.automatic = true;
        } else if (mode == "fixed") {
            config.sigma_policy.automatic = false;
            config.sigma_policy.value = sp.at("value").get<double>();
        } else {
            throw SchemaError("sigma_policy.mode must be 'auto' or 'fixed'");
        }
    }
    if (j.contains("weights")) {
        const json& w = j["weights"];
        config.weights.lambda_t = w.value("lambda_t", config.weights.lambda_t);
        config.weights.lambda_s = w.value("lambda_s", config.weights.lambda_s);
        config.weights.lambda_r = w.value("lambda_r", config.weights.lambda_r);
        if (w.contains("missing_edge_penalty") && !w["missing_edge_penalty"].is_null()) {
            config.weights.missing_edge_penalty = w["missing_edge_penalty"].get<double>();
        }
        config.weights.semantic_mismatch_penalty =
            w.value("semantic_mismatch_penalty", config.weights.semantic_mismatch_penalty);
    }
    if (j.contains("stitch")) {
        const json& s = j["stitch"];
        config.stitch.blend_seconds = s.value("blend_seconds", config.stitch.blend_seconds);
        config.stitch.max_time_stretch = s.value("max_time_stretch", config.stitch.max_time_stretch);
        config.stitch.output_fps = s.value("output_fps", config.stitch.output_fps);
    }
    return config;
}

std::vector<MotionSegment> load_database(const std::string& database_dir,
                                         const std::string& manifest_path,
                                         const SemanticLexicon& lexicon) {
    if (!fs::is_directory(database_dir)) {
        throw IoError("database dir not found: " + database_dir);
    }

    std::map<std::string, std::string> tag_of;  // clip file name -> semantic tag
    if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw IoError("cannot open manifest " + manifest_path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed manifest JSON: ") + e.what());
        }
        for (const auto& entry : j.at("clips")) {
            tag_of[entry.at("file").get<std::string>()] = entry.at("tag").get<std::string>();
        }
    }

    std::vector<std::string> files;
    const std::string manifest_name =
        manifest_path.empty() ? std::string() : fs::path(manifest_path).filename().string();
    for (const auto& entry : fs::directory_iterator(database_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const std::string ext = entry.path().extension().string();
        if (name == manifest_name) continue;
        if (ext == ".json" || ext == ".bvh") files.push_back(name);
    }
    std::sort(files.begin(), files.end());

    std::vector<MotionSegment> segments;
    for (const auto& name : files) {
        const MotionClip clip = load_motion_clip((fs::path(database_dir) / name).string());
        auto tagged = tag_of.find(name);
        if (tagged != tag_of.end()) {
            segments.push_back(ingest_semantic_clip(clip, tagged->second, lexicon));
            continue;
        }
        const StrengthCurve strength = compute_motion_strength(clip);
        const std::vector<int> points = find_dividing_points(
            strength, default_min_segment_len(clip.fps), kDefaultProminence);
        for (auto& seg : segment_clip(clip, points, strength)) {
            segments.push_back(std::move(seg));
        }
    }
    if (segments.empty()) throw EmptyGraphError("no motion clips under " + database_dir);
    return segments;
}

AnalysisResult analyze_speech(const std::string& wav_path, const std::string& script_path,
                              const SemanticLexicon& lexicon, double hop_seconds,
                              double max_gap_seconds) {
    AnalysisResult result;
    const AudioBuffer audio = load_wav(wav_path);
    result.envelope = onset_envelope(audio, hop_seconds);

    const std::vector<TimedWord> words = load_timed_words(script_path);
    result.phrases = split_phrases(words, max_gap_seconds, default_punctuation_breaks());
    for (auto& phrase : result.phrases) {
        phrase.semantic_tag = detect_semantic_tag(phrase, lexicon);
        result.phrase_rhythms.push_back(
            slice_rhythm(result.envelope, phrase.start_seconds, phrase.end_seconds));
    }
    return result;
}

namespace {

json rhythm_to_json(const RhythmCurve& c) {
    return {{"values", c.values},
            {"hop_seconds", c.hop_seconds},
            {"duration_seconds", c.duration_seconds}};
}

RhythmCurve rhythm_from_json(const json& j) {
    RhythmCurve c;
    c.values = j.at("values").get<std::vector<double>>();
    c.hop_seconds = j.at("hop_seconds").get<double>();
    c.duration_seconds = j.at("duration_seconds").get<double>();
    return c;
}

}  // namespace

void save_analysis(const AnalysisResult& analysis, const std::string& path) {
    json phrases = json::array();
    for (const auto& p : analysis.phrases) {
        json jp = {{"index", p.index},
                   {"text", p.text},
                   {"start", p.start_seconds},
                   {"end", p.end_seconds}};
        if (p.semantic_tag) jp["semantic_tag"] = *p.semantic_tag;
        phrases.push_back(std::move(jp));
    }
    json rhythms = json::array();
    for (const auto& r : analysis.phrase_rhythms) rhythms.push_back(rhythm_to_json(r));
    const json j = {{"phrases", std::move(phrases)},
                    {"envelope", rhythm_to_json(analysis.envelope)},
                    {"phrase_rhythms", std::move(rhythms)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write analysis " + path);
    out << j.dump(1) << "\n";
}

AnalysisResult load_analysis(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open analysis " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed analysis JSON: ") + e.what());
    }
    AnalysisResult result;
    for (const auto& jp : j.at("phrases")) {
        Phrase p;
        p.index = jp.at("index").get<int>();
        p.text = jp.at("text").get<std::string>();
        p.start_seconds = jp.at("start").get<double>();
        p.end_seconds = jp.at("end").get<double>();
        if (jp.contains("semantic_tag")) p.semantic_tag = jp["semantic_tag"].get<std::string>();
        result.phrases.push_back(std::move(p));
    }
    result.envelope = rhythm_from_json(j.at("envelope"));
    for (const auto& jr : j.at("phrase_rhythms")) {
        result.phrase_rhythms.push_back(rhythm_from_json(jr));
    }
    if (result.phrase_rhythms.size() != result.phrases.size()) {
        throw SchemaError("analysis phrases and rhythms disagree in length");
    }
    return result;
}

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, size_t len) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t fnv1a(std::uint64_t hash, const std::string& s) {
    return fnv1a(hash, s.data(), s.size() + 1);  // include the terminator as a separator
}

std::string database_hash(const PipelineConfig& config) {
    std::uint64_t hash = 1469598103934665603ULL;
    std::vector<std::string> files;
    if (fs::is_directory(config.database_dir)) {
        for (const auto& entry : fs::directory_iterator(config.database_dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path().filename().string());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& name : files) {
        hash = fnv1a(hash, name);
        std::ifstream in(fs::path(config.database_dir) / name, std::ios::binary);
        std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        hash = fnv1a(hash, body);
    }
    char policy[128];
    std::snprintf(policy, sizeof(policy), "sigma=%s:%.17g|vw=%.17g|bw=%d|ar=%d",
                  config.sigma_policy.automatic ? "auto" : "fixed",
                  config.sigma_policy.automatic ? 0.0 : config.sigma_policy.value,
                  TransitionParams{}.velocity_weight, TransitionParams{}.boundary_window,
                  TransitionParams{}.align_root ? 1 : 0);
    hash = fnv1a(hash, std::string(policy));
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace

MotionGraph build_or_load_graph(const PipelineConfig& config, const std::string& cache_dir,
                                bool* cache_hit) {
    if (cache_hit) *cache_hit = false;
    std::string cache_file;
    if (!cache_dir.empty()) {
        fs::create_directories(cache_dir);
        cache_file = (fs::path(cache_dir) / ("graph_cache_" + database_hash(config) + ".json"))
                         .string();
        if (fs::exists(cache_file)) {
            try {
                MotionGraph graph = load_graph(cache_file);
                if (cache_hit) *cache_hit = true;
                std::fprintf(stderr, "[cache] graph loaded from %s\n", cache_file.c_str());
                return graph;
            } catch (const Error& e) {
                std::fprintf(stderr, "[cache] ignoring unreadable cache %s: %s\n",
                             cache_file.c_str(), e.what());
            }
        }
    }

    const SemanticLexicon lexicon =
        config.lexicon.empty() ? default_lexicon() : load_lexicon(config.lexicon);
    const std::vector<MotionSegment> segments =
        load_database(config.database_dir, config.semantic_manifest, lexicon);
    const TransitionParams params;
    const double sigma =
        config.sigma_policy.automatic ? auto_sigma(segments, params) : config.sigma_policy.value;
    MotionGraph graph = build_graph(segments, sigma, params);
    if (!cache_file.empty()) {
        save_graph(graph, cache_file);
        std::fprintf(stderr, "[cache] graph written to %s\n", cache_file.c_str());
    }
    return graph;
}

RunResult run_pipeline(const PipelineConfig& config, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const SemanticLexicon lexicon =
        config.lexicon.empty() ? default_lexicon() : load_lexicon(config.lexicon);

    const AnalysisResult analysis = stage("analyze", [&] {
        return analyze_speech(config.wav, config.script, lexicon, config.hop_seconds,
                              config.max_gap_seconds);
    });

    const MotionGraph graph =
        stage("build-graph", [&] { return build_or_load_graph(config, out_dir); });

    const SynthesisPath path = stage("synthesize", [&] {
        validate_weights(config.weights, graph.sigma,
                         static_cast<int>(analysis.phrases.size()));
        return synthesize_path(graph, analysis.phrases, analysis.phrase_rhythms, config.weights);
    });

    StitchReport stitch_report;
    const MotionClip motion = stage("render-path", [&] {
        return assemble(path, graph, analysis.phrases, config.stitch, &stitch_report);
    });

    RunResult result;
    result.path = path;
    result.motion_path = (fs::path(out_dir) / "motion.json").string();
    result.report_path = (fs::path(out_dir) / "report.json").string();
    stage("write-output", [&] {
        save_motion_clip(motion, result.motion_path);

        json phrases = json::array();
        for (size_t i = 0; i < analysis.phrases.size(); ++i) {
            const Phrase& p = analysis.phrases[i];
            json jp = {{"index", p.index},
                       {"text", p.text},
                       {"start", p.start_seconds},
                       {"end", p.end_seconds},
                       {"assigned", path.assignments[i]},
                       {"transition_cost", path.per_phrase_costs[i].transition},
                       {"phrase_cost", path.per_phrase_costs[i].semantic_or_rhythm}};
            if (p.semantic_tag) {
                jp["semantic_tag"] = *p.semantic_tag;
                const auto& node = graph.node_or_throw(path.assignments[i]);
                jp["semantic_fallback"] =
                    !(node.semantic_tag && *node.semantic_tag == *p.semantic_tag);
            }
            phrases.push_back(std::move(jp));
        }
        json events = json::array();
        for (const auto& e : stitch_report.events) {
            events.push_back({{"phrase_index", e.phrase_index},
                              {"kind", e.kind},
                              {"requested_seconds", e.requested_seconds},
                              {"actual_seconds", e.actual_seconds}});
        }
        const json report = {{"phrases", std::move(phrases)},
                             {"total_cost", path.total_cost},
                             {"sigma", graph.sigma},
                             {"node_count", graph.nodes.size()},
                             {"edge_count", graph.edges.size()},
                             {"stitch_events", std::move(events)},
                             {"output",
                              {{"frames", motion.frame_count()},
                               {"fps", motion.fps},
                               {"duration_seconds", motion.duration_seconds()}}}};
        std::ofstream out(result.report_path, std::ios::binary);
        if (!out) throw IoError("cannot write report " + result.report_path);
        out << report.dump(1) << "\n";
        return 0;
    });
    return result;
}

}  // namespace mograph
