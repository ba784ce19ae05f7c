#include "mograph/fixture.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"
#include "mograph/motion_io.hpp"
#include "mograph/phrases.hpp"
#include "mograph/wav.hpp"

namespace mograph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Skeleton fixture_skeleton() {
    Skeleton s;
    auto add = [&s](const std::string& name, int parent, double x, double y, double z) {
        s.joints.push_back({name, parent, Vec3(x, y, z)});
        return static_cast<int>(s.joints.size()) - 1;
    };
    const int root = add("root", -1, 0, 0, 0);
    const int spine = add("spine", root, 0, 0.15, 0);
    const int chest = add("chest", spine, 0, 0.15, 0);
    const int neck = add("neck", chest, 0, 0.12, 0);
    add("head", neck, 0, 0.10, 0);
    const int sho_l = add("shoulder_l", chest, 0.18, 0.05, 0);
    const int elb_l = add("elbow_l", sho_l, 0.26, 0, 0);
    add("hand_l", elb_l, 0.25, 0, 0);
    const int sho_r = add("shoulder_r", chest, -0.18, 0.05, 0);
    const int elb_r = add("elbow_r", sho_r, -0.26, 0, 0);
    add("hand_r", elb_r, -0.25, 0, 0);
    const int hip_l = add("hip_l", root, 0.09, -0.05, 0);
    const int knee_l = add("knee_l", hip_l, 0, -0.40, 0);
    add("foot_l", knee_l, 0, -0.40, 0);
    const int hip_r = add("hip_r", root, -0.09, -0.05, 0);
    const int knee_r = add("knee_r", hip_r, 0, -0.40, 0);
    add("foot_r", knee_r, 0, -0.40, 0);
    s.salient_joint_names = {"root", "head", "hand_l", "hand_r", "foot_l", "foot_r"};
    s.validate();
    return s;
}

// Four slow amplitude profiles, cycled by index; u in [0,1].
double shape_profile(int shape, double u) {
    switch (shape & 3) {
        case 0: return 0.15 + 0.85 * u;                       // ramp up
        case 1: return 1.0 - 0.85 * u;                        // ramp down
        case 2: return 0.15 + 0.85 * std::sin(M_PI * u);      // bump
        default: return 1.0 - 0.85 * std::sin(M_PI * u);      // dip
    }
}

MotionClip make_filler_clip(const Skeleton& skeleton, int index, const FixtureSpec& spec,
                            std::mt19937& rng) {
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const double amp = 0.35 + 0.15 * jitter(rng);
    const double phase = 2.0 * M_PI * jitter(rng);
    const double omega = 2.0 * M_PI * (0.8 + 0.1 * (index % 3));

    MotionClip clip;
    clip.skeleton = skeleton;
    clip.fps = spec.fps;
    clip.source_id = "motion_" + std::to_string(index);

    const int frames = static_cast<int>(std::lround(spec.clip_seconds * spec.fps)) + 1;
    const int sho_l = skeleton.index_of("shoulder_l");
    const int sho_r = skeleton.index_of("shoulder_r");
    const int spine = skeleton.index_of("spine");
    for (int f = 0; f < frames; ++f) {
        const double t = f / spec.fps;
        const double u = frames > 1 ? static_cast<double>(f) / (frames - 1) : 0.0;
        const double envelope = shape_profile(index, u);
        MotionFrame frame;
        frame.root_position = Vec3(0, 0.9, 0);
        frame.joint_rotations.assign(skeleton.joints.size(), Quat::Identity());
        const double swing = amp * envelope * std::sin(omega * t + phase);
        frame.joint_rotations[sho_l] = Quat(Eigen::AngleAxisd(swing, Vec3::UnitZ()));
        frame.joint_rotations[sho_r] = Quat(Eigen::AngleAxisd(-swing, Vec3::UnitZ()));
        frame.joint_rotations[spine] =
            Quat(Eigen::AngleAxisd(0.1 * envelope * std::sin(0.5 * omega * t), Vec3::UnitX()));
        clip.frames.push_back(std::move(frame));
    }
    clip.validate();
    return clip;
}

MotionClip make_semantic_clip(const Skeleton& skeleton, int index, const std::string& tag,
                              const FixtureSpec& spec) {
    MotionClip clip;
    clip.skeleton = skeleton;
    clip.fps = spec.fps;
    clip.source_id = "semantic_" + std::to_string(index);

    const int frames = static_cast<int>(std::lround(2.0 * spec.fps)) + 1;
    const bool left_side = index % 2 == 0;
    const int shoulder = skeleton.index_of(left_side ? "shoulder_l" : "shoulder_r");
    const int elbow = skeleton.index_of(left_side ? "elbow_l" : "elbow_r");
    const double reach = 0.7 + 0.1 * (index % 3);
    const Vec3 axis = index % 3 == 2 ? Vec3::UnitX() : Vec3::UnitZ();
    (void)tag;  // the pose family is keyed by index; the tag lives in the manifest

    for (int f = 0; f < frames; ++f) {
        const double u = static_cast<double>(f) / (frames - 1);
        // raise, hold, lower
        const double lift = u < 0.3 ? u / 0.3 : (u > 0.7 ? (1.0 - u) / 0.3 : 1.0);
        MotionFrame frame;
        frame.root_position = Vec3(0, 0.9, 0);
        frame.joint_rotations.assign(skeleton.joints.size(), Quat::Identity());
        const double sign = left_side ? 1.0 : -1.0;
        frame.joint_rotations[shoulder] = Quat(Eigen::AngleAxisd(sign * reach * lift, axis));
        frame.joint_rotations[elbow] = Quat(Eigen::AngleAxisd(sign * 0.3 * lift, Vec3::UnitZ()));
        clip.frames.push_back(std::move(frame));
    }
    clip.validate();
    return clip;
}

struct ScriptPhrase {
    std::vector<std::string> words;
};

std::vector<ScriptPhrase> fixture_script() {
    return {
        {{"the", "team", "plans", "a", "demo", "today."}},
        {{"now", "point", "left", "please."}},
        {{"our", "pipeline", "builds", "and", "tests", "models", "daily."}},
        {{"metrics", "look", "steady", "this", "week."}},
        {{"we", "have", "three", "options", "here."}},
        {{"each", "stage", "runs", "in", "order."}},
        {{"the", "release", "can", "proceed", "soon."}},
        {{"thanks", "everyone", "for", "watching."}},
    };
}

void append_click(std::vector<double>& samples, int sample_rate, double at_seconds,
                  double amplitude) {
    const int start = static_cast<int>(std::lround(at_seconds * sample_rate));
    const int len = static_cast<int>(std::lround(0.012 * sample_rate));
    for (int i = 0; i < len && start + i < static_cast<int>(samples.size()); ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        samples[start + i] += amplitude * std::sin(2.0 * M_PI * 1800.0 * t) * std::exp(-t / 0.004);
    }
}

}  // namespace

FixturePaths generate_fixture(const FixtureSpec& spec, const std::string& out_dir) {
    if (spec.n_clips < 1) throw ValueError("fixture needs at least one clip");
    if (spec.n_semantic < 0) throw ValueError("negative semantic clip count");
    if (!(spec.fps > 0) || !(spec.clip_seconds > 0)) throw ValueError("bad fixture timing");
    if (spec.sample_rate < 8000) throw ValueError("fixture sample rate must be >= 8000");

    const fs::path base(out_dir);
    const fs::path db = base / "db";
    fs::create_directories(db);

    std::mt19937 rng(spec.seed);
    const Skeleton skeleton = fixture_skeleton();

    FixturePaths paths;
    paths.database_dir = db.string();

    for (int i = 0; i < spec.n_clips; ++i) {
        const MotionClip clip = make_filler_clip(skeleton, i, spec, rng);
        char name[32];
        std::snprintf(name, sizeof(name), "motion_%02d.json", i);
        save_motion_clip(clip, (db / name).string());
    }

    const std::vector<std::string> tag_pool = {"left",     "number_three", "greeting",
                                               "right",    "negation",     "up",
                                               "farewell", "big",          "question",
                                               "agreement"};
    json manifest_clips = json::array();
    for (int i = 0; i < spec.n_semantic; ++i) {
        const std::string tag = tag_pool[i % tag_pool.size()];
        const MotionClip clip = make_semantic_clip(skeleton, i, tag, spec);
        char name[32];
        std::snprintf(name, sizeof(name), "semantic_%02d.json", i);
        save_motion_clip(clip, (db / name).string());
        manifest_clips.push_back({{"file", name}, {"tag", tag}});
    }
    paths.manifest = (db / "manifest.json").string();
    {
        std::ofstream out(paths.manifest, std::ios::binary);
        if (!out) throw IoError("cannot write manifest " + paths.manifest);
        out << json{{"clips", manifest_clips}}.dump(1) << "\n";
    }

    paths.lexicon = (base / "lexicon.json").string();
    save_lexicon(default_lexicon(), paths.lexicon);

    // Timed words: fixed cadence, break punctuation closing each phrase.
    const auto script = fixture_script();
    const double word_len = 0.32, word_gap = 0.06, phrase_gap = 0.50;
    json words = json::array();
    std::vector<std::pair<double, double>> phrase_spans;
    double t = 0.25;
    for (const auto& phrase : script) {
        const double start = t;
        for (size_t w = 0; w < phrase.words.size(); ++w) {
            words.push_back({{"word", phrase.words[w]}, {"start", t}, {"end", t + word_len}});
            t += word_len + (w + 1 < phrase.words.size() ? word_gap : 0.0);
        }
        phrase_spans.emplace_back(start, t);
        t += phrase_gap;
    }
    paths.script = (base / "script.json").string();
    {
        std::ofstream out(paths.script, std::ios::binary);
        if (!out) throw IoError("cannot write script " + paths.script);
        out << words.dump(1) << "\n";
    }

    // Click track: per-phrase click amplitudes follow the same shape
    // profiles the filler clips cycle through.
    AudioBuffer audio;
    audio.sample_rate = spec.sample_rate;
    audio.samples.assign(static_cast<size_t>(std::lround((t + 0.5) * spec.sample_rate)), 0.0);
    for (size_t p = 0; p < phrase_spans.size(); ++p) {
        const auto [start, end] = phrase_spans[p];
        const double step = 0.16;
        for (double ct = start; ct < end; ct += step) {
            const double u = (ct - start) / (end - start);
            append_click(audio.samples, spec.sample_rate, ct,
                         0.25 + 0.7 * shape_profile(static_cast<int>(p), u));
        }
    }
    paths.wav = (base / "speech.wav").string();
    save_wav(audio, paths.wav);

    paths.config = (base / "config.json").string();
    {
        json config = {
            {"database_dir", "db"},
            {"semantic_manifest", "db/manifest.json"},
            {"lexicon", "lexicon.json"},
            {"script", "script.json"},
            {"wav", "speech.wav"},
            {"hop_seconds", 0.02},
            {"max_gap_seconds", 0.35},
            {"sigma_policy", {{"mode", "auto"}}},
            {"weights",
             {{"lambda_t", 1.0},
              {"lambda_s", 10.0},
              {"lambda_r", 1.0},
              {"missing_edge_penalty", nullptr},
              {"semantic_mismatch_penalty", 1e6}}},
            {"stitch",
             {{"blend_seconds", 0.25}, {"max_time_stretch", 1.5}, {"output_fps", 25.0}}},
            {"random_seed", spec.seed}};
        std::ofstream out(paths.config, std::ios::binary);
        if (!out) throw IoError("cannot write config " + paths.config);
        out << config.dump(1) << "\n";
    }
    return paths;
}

}  // namespace mograph
