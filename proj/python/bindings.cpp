#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mograph/errors.hpp"
#include "mograph/face/blendshapes.hpp"
#include "mograph/face/correction.hpp"
#include "mograph/face/losses.hpp"
#include "mograph/fixture.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/rhythm.hpp"

namespace py = pybind11;

namespace {

using namespace mograph;

face::BlendshapeSequence to_sequence(const std::vector<std::vector<double>>& frames, double fps) {
    face::BlendshapeSequence seq;
    seq.fps = fps;
    seq.frames.reserve(frames.size());
    for (const auto& row : frames) {
        if (row.size() != face::kChannelCount) {
            throw ValueError("each frame needs exactly 52 channels");
        }
        face::BlendshapeFrame frame{};
        std::copy(row.begin(), row.end(), frame.begin());
        seq.frames.push_back(frame);
    }
    seq.validate();
    return seq;
}

std::vector<std::vector<double>> from_sequence(const face::BlendshapeSequence& seq) {
    std::vector<std::vector<double>> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) out.emplace_back(frame.begin(), frame.end());
    return out;
}

}  // namespace

PYBIND11_MODULE(_mograph, m) {
    m.doc() = "motion-graph gesture synthesis core";

    py::register_exception<Error>(m, "MographError");

    m.def("channel_names", [] {
        const auto& names = face::channel_names();
        return std::vector<std::string>(names.begin(), names.end());
    });

    m.def(
        "lip_loss",
        [](const std::vector<std::vector<double>>& pred,
           const std::vector<std::vector<double>>& gt) {
            return face::lip_loss(to_sequence(pred, 25.0), to_sequence(gt, 25.0));
        },
        py::arg("pred"), py::arg("gt"),
        "Shape + motion distance between two 52-channel sequences.");

    m.def(
        "ssim_loss",
        [](const std::vector<std::vector<double>>& pred,
           const std::vector<std::vector<double>>& gt, double delta1, double delta2) {
            return face::ssim_loss(to_sequence(pred, 25.0), to_sequence(gt, 25.0), delta1, delta2);
        },
        py::arg("pred"), py::arg("gt"), py::arg("delta1") = 1e-4, py::arg("delta2") = 9e-4,
        "1 - SSIM over the flattened sequences.");

    m.def(
        "articulation_correction",
        [](const std::vector<std::vector<double>>& frames, const std::vector<std::string>& labels,
           int ramp_frames) {
            face::PhonemeTimeline timeline;
            timeline.labels = labels;
            return from_sequence(face::articulation_correction(
                to_sequence(frames, 25.0), timeline, {face::kJawOpen}, ramp_frames));
        },
        py::arg("frames"), py::arg("phonemes"), py::arg("ramp_frames") = 2,
        "Close the mouth on b/p/m frames, with linear ramps.");

    m.def(
        "rhythm_cost",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return rhythm_cost(a, b);
        },
        py::arg("a"), py::arg("b"), "1 - Pearson correlation at 64 resampled points.");

    m.def(
        "onset_envelope",
        [](const std::vector<double>& samples, int sample_rate, double hop_seconds) {
            AudioBuffer audio{samples, sample_rate};
            const RhythmCurve curve = onset_envelope(audio, hop_seconds);
            py::dict out;
            out["values"] = curve.values;
            out["hop_seconds"] = curve.hop_seconds;
            out["duration_seconds"] = curve.duration_seconds;
            return out;
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("hop_seconds") = 0.02,
        "Unit-max spectral-flux onset strength per hop.");

    m.def(
        "generate_fixture",
        [](unsigned seed, int n_clips, int n_semantic, const std::string& out_dir) {
            FixtureSpec spec;
            spec.seed = seed;
            spec.n_clips = n_clips;
            spec.n_semantic = n_semantic;
            const FixturePaths paths = generate_fixture(spec, out_dir);
            py::dict out;
            out["database_dir"] = paths.database_dir;
            out["manifest"] = paths.manifest;
            out["lexicon"] = paths.lexicon;
            out["script"] = paths.script;
            out["wav"] = paths.wav;
            out["config"] = paths.config;
            return out;
        },
        py::arg("seed") = 0, py::arg("n_clips") = 10, py::arg("n_semantic") = 2,
        py::arg("out_dir") = "fixture",
        "Write a deterministic synthetic database, script, and click-track wav.");

    m.def(
        "run_pipeline",
        [](const std::string& config_path, const std::string& out_dir) {
            const PipelineConfig config = load_config(config_path);
            const RunResult result = run_pipeline(config, out_dir);
            py::dict out;
            out["motion"] = result.motion_path;
            out["report"] = result.report_path;
            out["total_cost"] = result.path.total_cost;
            out["assignments"] = result.path.assignments;
            return out;
        },
        py::arg("config"), py::arg("out_dir"),
        "Full analyze -> graph -> synthesize -> stitch pipeline.");
}
