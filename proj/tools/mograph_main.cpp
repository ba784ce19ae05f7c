#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mograph/errors.hpp"
#include "mograph/face/correction.hpp"
#include "mograph/face/losses.hpp"
#include "mograph/fixture.hpp"
#include "mograph/motion_io.hpp"
#include "mograph/pipeline.hpp"

namespace {

using namespace mograph;

SemanticLexicon lexicon_or_default(const std::string& path) {
    return path.empty() ? default_lexicon() : load_lexicon(path);
}

int cmd_gen_fixture(const FixtureSpec& spec, const std::string& out_dir) {
    const FixturePaths paths = generate_fixture(spec, out_dir);
    std::cout << "fixture written under " << out_dir << "\n"
              << "  config:  " << paths.config << "\n"
              << "  script:  " << paths.script << "\n"
              << "  wav:     " << paths.wav << "\n";
    return 0;
}

int cmd_build_graph(const std::string& database, const std::string& manifest,
                    const std::string& lexicon_path, const std::string& sigma_arg,
                    const std::string& out) {
    const SemanticLexicon lexicon = lexicon_or_default(lexicon_path);
    const std::vector<MotionSegment> segments = load_database(database, manifest, lexicon);
    const TransitionParams params;
    double sigma;
    if (sigma_arg == "auto") {
        sigma = auto_sigma(segments, params);
    } else {
        try {
            sigma = std::stod(sigma_arg);
        } catch (const std::exception&) {
            throw ValueError("--sigma expects a number or 'auto'");
        }
    }
    const MotionGraph graph = build_graph(segments, sigma, params);
    save_graph(graph, out);
    std::cout << "graph: " << graph.nodes.size() << " nodes, " << graph.edges.size()
              << " edges, sigma " << graph.sigma << " -> " << out << "\n";
    return 0;
}

int cmd_analyze(const std::string& wav, const std::string& script,
                const std::string& lexicon_path, double hop, double max_gap,
                const std::string& out) {
    const AnalysisResult analysis =
        analyze_speech(wav, script, lexicon_or_default(lexicon_path), hop, max_gap);
    save_analysis(analysis, out);
    std::cout << "analyzed " << analysis.phrases.size() << " phrases -> " << out << "\n";
    return 0;
}

int cmd_synthesize(const std::string& graph_path, const std::string& phrases_path,
                   const std::string& wav, const std::string& weights_path,
                   const std::string& out) {
    const MotionGraph graph = load_graph(graph_path);
    AnalysisResult analysis = load_analysis(phrases_path);
    if (!wav.empty()) {
        const AudioBuffer audio = load_wav(wav);
        analysis.envelope = onset_envelope(audio, 0.02);
        analysis.phrase_rhythms.clear();
        for (const auto& phrase : analysis.phrases) {
            analysis.phrase_rhythms.push_back(
                slice_rhythm(analysis.envelope, phrase.start_seconds, phrase.end_seconds));
        }
    }
    const CostWeights weights =
        weights_path.empty() ? CostWeights{} : load_weights(weights_path);
    validate_weights(weights, graph.sigma, static_cast<int>(analysis.phrases.size()));
    const SynthesisPath path =
        synthesize_path(graph, analysis.phrases, analysis.phrase_rhythms, weights);
    save_path(path, out);
    std::cout << "total cost " << path.total_cost << " over " << path.assignments.size()
              << " phrases -> " << out << "\n";
    return 0;
}

int cmd_render_path(const std::string& graph_path, const std::string& path_path,
                    const std::string& phrases_path, const StitchParams& params,
                    const std::string& out) {
    const MotionGraph graph = load_graph(graph_path);
    const SynthesisPath path = load_path(path_path);
    const AnalysisResult analysis = load_analysis(phrases_path);
    StitchReport report;
    const MotionClip motion = assemble(path, graph, analysis.phrases, params, &report);
    save_motion_clip(motion, out);
    std::cout << "rendered " << motion.frame_count() << " frames ("
              << motion.duration_seconds() << " s) -> " << out << "\n";
    for (const auto& e : report.events) {
        std::cout << "  phrase " << e.phrase_index << " " << e.kind << ": requested "
                  << e.requested_seconds << " s, got " << e.actual_seconds << " s\n";
    }
    return 0;
}

int cmd_face_check(const std::string& pred_path, const std::string& gt_path,
                   const std::string& phonemes_path, double fps, int ramp) {
    const face::BlendshapeSequence pred = face::load_blendshape_csv(pred_path, fps);
    const face::BlendshapeSequence gt = face::load_blendshape_csv(gt_path, fps);
    std::cout << "lip_loss: " << face::lip_loss(pred, gt) << "\n";
    std::cout << "ssim_loss: " << face::ssim_loss(pred, gt) << "\n";
    if (!phonemes_path.empty()) {
        const auto intervals = face::load_phoneme_tsv(phonemes_path);
        const face::PhonemeTimeline timeline =
            face::rasterize_phonemes(intervals, pred.frame_count(), pred.fps);
        const face::BlendshapeSequence corrected =
            face::articulation_correction(pred, timeline, {face::kJawOpen}, ramp);
        int changed = 0;
        double max_delta = 0.0;
        for (int t = 0; t < pred.frame_count(); ++t) {
            bool frame_changed = false;
            for (int c = 0; c < face::kChannelCount; ++c) {
                const double d = std::abs(corrected.frames[t][c] - pred.frames[t][c]);
                if (d > 0.0) frame_changed = true;
                max_delta = std::max(max_delta, d);
            }
            if (frame_changed) ++changed;
        }
        std::cout << "corrected_frames: " << changed << "\n";
        std::cout << "max_correction_delta: " << max_delta << "\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const PipelineConfig config = load_config(config_path);
    const RunResult result = run_pipeline(config, out_dir);
    std::cout << "motion: " << result.motion_path << "\n"
              << "report: " << result.report_path << "\n"
              << "total cost " << result.path.total_cost << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"motion-graph gesture synthesis pipeline"};
    app.require_subcommand(1);

    // gen-fixture
    FixtureSpec fixture;
    std::string fixture_out = "fixture";
    auto* gen = app.add_subcommand("gen-fixture", "generate a synthetic database + script + wav");
    gen->add_option("--seed", fixture.seed, "random seed");
    gen->add_option("--clips", fixture.n_clips, "number of filler clips");
    gen->add_option("--semantic", fixture.n_semantic, "number of tagged clips");
    gen->add_option("--out", fixture_out, "output directory");

    // build-graph
    std::string database, manifest, lexicon_path, sigma_arg = "auto", graph_out = "graph.json";
    auto* build = app.add_subcommand("build-graph", "segment a database and build the motion graph");
    build->add_option("--database", database, "clip directory")->required();
    build->add_option("--manifest", manifest, "semantic clip manifest JSON");
    build->add_option("--lexicon", lexicon_path, "semantic lexicon JSON");
    build->add_option("--sigma", sigma_arg, "edge threshold, or 'auto'");
    build->add_option("--out", graph_out, "output graph JSON");

    // analyze
    std::string wav, script, analysis_out = "phrases.json";
    double hop = 0.02, max_gap = 0.35;
    auto* analyze = app.add_subcommand("analyze", "split the script and extract speech rhythm");
    analyze->add_option("--wav", wav, "mono 16-bit PCM wav")->required();
    analyze->add_option("--script", script, "timed word JSON")->required();
    analyze->add_option("--lexicon", lexicon_path, "semantic lexicon JSON");
    analyze->add_option("--hop", hop, "onset hop in seconds");
    analyze->add_option("--max-gap", max_gap, "silence gap starting a new phrase");
    analyze->add_option("--out", analysis_out, "output phrase JSON");

    // synthesize
    std::string graph_in, phrases_in, weights_in, path_out = "path.json";
    auto* synth = app.add_subcommand("synthesize", "assign one graph node per phrase");
    synth->add_option("--graph", graph_in, "graph JSON")->required();
    synth->add_option("--phrases", phrases_in, "phrase JSON from analyze")->required();
    synth->add_option("--wav", wav, "recompute rhythm from this wav");
    synth->add_option("--weights", weights_in, "cost weight JSON");
    synth->add_option("--out", path_out, "output path JSON");

    // render-path
    std::string path_in, motion_out = "motion.json";
    StitchParams stitch;
    auto* render = app.add_subcommand("render-path", "stitch an assigned path into one clip");
    render->add_option("--graph", graph_in, "graph JSON")->required();
    render->add_option("--path", path_in, "path JSON from synthesize")->required();
    render->add_option("--phrases", phrases_in, "phrase JSON from analyze")->required();
    render->add_option("--blend", stitch.blend_seconds, "cross-blend seconds");
    render->add_option("--max-stretch", stitch.max_time_stretch, "time warp clamp");
    render->add_option("--fps", stitch.output_fps, "output frame rate");
    render->add_option("--out", motion_out, "output motion JSON");

    // face-check
    std::string pred_csv, gt_csv, phonemes_tsv;
    double face_fps = 25.0;
    int ramp = 2;
    auto* face = app.add_subcommand("face-check", "compare blendshape sequences and corrections");
    face->add_option("--pred", pred_csv, "predicted blendshape CSV")->required();
    face->add_option("--gt", gt_csv, "ground-truth blendshape CSV")->required();
    face->add_option("--phonemes", phonemes_tsv, "phoneme TSV for articulation correction");
    face->add_option("--fps", face_fps, "sequence frame rate");
    face->add_option("--ramp", ramp, "correction ramp frames");

    // run
    std::string config_path, run_out = "out";
    auto* run = app.add_subcommand("run", "full pipeline from a config file");
    run->add_option("--config", config_path, "pipeline config JSON")->required();
    run->add_option("--out-dir", run_out, "output directory");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen_fixture(fixture, fixture_out);
        if (build->parsed()) {
            return cmd_build_graph(database, manifest, lexicon_path, sigma_arg, graph_out);
        }
        if (analyze->parsed()) {
            return cmd_analyze(wav, script, lexicon_path, hop, max_gap, analysis_out);
        }
        if (synth->parsed()) {
            return cmd_synthesize(graph_in, phrases_in, wav, weights_in, path_out);
        }
        if (render->parsed()) {
            return cmd_render_path(graph_in, path_in, phrases_in, stitch, motion_out);
        }
        if (face->parsed()) return cmd_face_check(pred_csv, gt_csv, phonemes_tsv, face_fps, ramp);
        if (run->parsed()) return cmd_run(config_path, run_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mograph::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mograph::is_validation_error(e) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
