#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mograph/errors.hpp"
#include "mograph/phrases.hpp"
#include "mograph/rhythm.hpp"

using namespace mograph;

namespace {

std::vector<TimedWord> demo_words() {
    return {
        {"hello", 0.00, 0.30},
        {"world.", 0.35, 0.70},
        {"next", 0.80, 1.00},
        {"phrase", 1.50, 1.80},
    };
}

AudioBuffer silence(int samples, int sr = 16000) {
    AudioBuffer a;
    a.sample_rate = sr;
    a.samples.assign(samples, 0.0);
    return a;
}

}  // namespace

TEST_CASE("split_phrases breaks at punctuation and long gaps") {
    const auto phrases = split_phrases(demo_words(), 0.35, default_punctuation_breaks());
    REQUIRE(phrases.size() == 3);

    CHECK(phrases[0].index == 0);
    CHECK(phrases[0].text == "hello world.");
    CHECK(phrases[0].start_seconds == doctest::Approx(0.0));
    CHECK(phrases[0].end_seconds == doctest::Approx(0.7));

    // 0.5 s of silence between "next" and "phrase" exceeds the gap limit.
    CHECK(phrases[1].text == "next");
    CHECK(phrases[2].text == "phrase");
    CHECK(phrases[2].index == 2);
    CHECK(phrases[2].start_seconds == doctest::Approx(1.5));

    // A generous gap limit leaves the punctuation as the only break.
    const auto loose = split_phrases(demo_words(), 10.0, default_punctuation_breaks());
    REQUIRE(loose.size() == 2);
    CHECK(loose[1].text == "next phrase");
}

TEST_CASE("split_phrases places every word in exactly one phrase") {
    const auto words = demo_words();
    const auto phrases = split_phrases(words, 0.35, default_punctuation_breaks());
    size_t word_count = 0;
    double prev_end = -1.0;
    for (const auto& p : phrases) {
        CHECK(p.start_seconds > prev_end);
        CHECK(p.end_seconds > p.start_seconds);
        prev_end = p.end_seconds;
        word_count += 1 + std::count(p.text.begin(), p.text.end(), ' ');
    }
    CHECK(word_count == words.size());

    CHECK(split_phrases({}, 0.35, default_punctuation_breaks()).empty());
    CHECK_THROWS_AS(
        split_phrases({{"b", 1.0, 1.2}, {"a", 0.0, 0.2}}, 0.35, default_punctuation_breaks()),
        ValueError);
}

TEST_CASE("semantic tags: whole-word, earliest occurrence, lexicographic ties") {
    const SemanticLexicon lex = default_lexicon();
    auto tag_of = [&lex](const std::string& text) {
        Phrase p;
        p.text = text;
        return detect_semantic_tag(p, lex);
    };

    CHECK(tag_of("we have three options here.") == std::optional<std::string>("number_three"));
    CHECK(tag_of("We Have THREE options") == std::optional<std::string>("number_three"));
    CHECK(tag_of("we have 3 options") == std::optional<std::string>("number_three"));
    // Substrings of longer words never match.
    CHECK(!tag_of("the threshold is fine").has_value());
    CHECK(!tag_of("they went offstage").has_value());
    // Earliest keyword of the phrase wins, regardless of tag order.
    CHECK(tag_of("raise it up, then look left") == std::optional<std::string>("up"));
    CHECK(tag_of("look left, then raise it up") == std::optional<std::string>("left"));
    CHECK(!tag_of("").has_value());

    // Two tags sharing a keyword: the lexicographically smaller tag wins the tie.
    SemanticLexicon shared;
    shared.entries["beta"] = {{"go"}, TagCategory::special};
    shared.entries["alpha"] = {{"go"}, TagCategory::special};
    Phrase p;
    p.text = "ready set go";
    CHECK(detect_semantic_tag(p, shared) == std::optional<std::string>("alpha"));
}

TEST_CASE("default lexicon covers the three tag families") {
    const SemanticLexicon lex = default_lexicon();
    lex.validate();
    CHECK(lex.entries.size() == 24);
    int counts[3] = {0, 0, 0};
    for (const auto& [tag, entry] : lex.entries) {
        CHECK(!entry.keywords.empty());
        ++counts[static_cast<int>(entry.category)];
    }
    CHECK(counts[static_cast<int>(TagCategory::number)] == 10);
    CHECK(counts[static_cast<int>(TagCategory::orientation)] == 6);
    CHECK(counts[static_cast<int>(TagCategory::special)] == 8);
    CHECK(lex.has_tag("left"));
    CHECK(!lex.has_tag("sideways"));
}

TEST_CASE("lexicon and script files round-trip") {
    testutil::TempDir tmp("speech_io");
    const SemanticLexicon lex = default_lexicon();
    save_lexicon(lex, tmp.file("lexicon.json"));
    const SemanticLexicon loaded = load_lexicon(tmp.file("lexicon.json"));
    REQUIRE(loaded.entries.size() == lex.entries.size());
    for (const auto& [tag, entry] : lex.entries) {
        REQUIRE(loaded.entries.count(tag) == 1);
        CHECK(loaded.entries.at(tag).keywords == entry.keywords);
        CHECK(loaded.entries.at(tag).category == entry.category);
    }
    CHECK_THROWS_AS(load_lexicon(tmp.file("nope.json")), IoError);

    {
        std::ofstream out(tmp.file("script.json"));
        out << R"([{"word":"hi.","start":0.1,"end":0.4},{"word":"there","start":0.5,"end":0.9}])";
    }
    const auto words = load_timed_words(tmp.file("script.json"));
    REQUIRE(words.size() == 2);
    CHECK(words[0].word == "hi.");
    CHECK(words[1].start == doctest::Approx(0.5));

    {
        std::ofstream out(tmp.file("badscript.json"));
        out << R"([{"word":"hi."}])";
    }
    CHECK_THROWS_AS(load_timed_words(tmp.file("badscript.json")), SchemaError);
}

TEST_CASE("onset envelope: silence stays at zero") {
    const RhythmCurve curve = onset_envelope(silence(16000), 0.02);
    CHECK(curve.values.size() == 50);  // ceil(16000 / 320)
    CHECK(curve.hop_seconds == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(curve.duration_seconds == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : curve.values) CHECK(v == 0.0);
}

TEST_CASE("onset envelope: an impulse lands in its own hop") {
    AudioBuffer a = silence(16000);
    a.samples[8000] = 1.0;  // t = 0.5 s
    const RhythmCurve curve = onset_envelope(a, 0.02);
    const auto peak_it = std::max_element(curve.values.begin(), curve.values.end());
    const long peak = peak_it - curve.values.begin();
    CHECK(*peak_it == doctest::Approx(1.0));
    CHECK(std::abs(peak * curve.hop_seconds - 0.5) <= curve.hop_seconds + 1e-12);
    // Window 25 starts exactly at the impulse, where the Hann taper is zero;
    // window 24 holds it mid-window, so the flux spike lands there.
    CHECK(peak == 24);
}

TEST_CASE("onset envelope: energy at t=0 registers in frame 0") {
    AudioBuffer a = silence(16000);
    for (int i = 0; i < 160; ++i) {
        a.samples[i] = std::sin(2.0 * M_PI * 880.0 * i / a.sample_rate);
    }
    const RhythmCurve curve = onset_envelope(a, 0.02);
    CHECK(curve.values[0] == doctest::Approx(1.0));
}

TEST_CASE("onset envelope: a steady tone has no onsets after the attack") {
    AudioBuffer a = silence(16000);
    for (size_t i = 0; i < a.samples.size(); ++i) {
        a.samples[i] = 0.8 * std::sin(2.0 * M_PI * 440.0 * i / a.sample_rate);
    }
    const RhythmCurve curve = onset_envelope(a, 0.02);
    CHECK(curve.values[0] == doctest::Approx(1.0));
    for (size_t t = 2; t + 1 < curve.values.size(); ++t) {
        CHECK(curve.values[t] < 0.05);
    }
}

TEST_CASE("onset envelope: input validation") {
    CHECK_THROWS_AS(onset_envelope(silence(16000, 4000), 0.02), ValueError);
    CHECK_THROWS_AS(onset_envelope(silence(16000), 0.005), ValueError);
    CHECK_THROWS_AS(onset_envelope(silence(16000), 0.2), ValueError);
    CHECK_THROWS_AS(onset_envelope(silence(0), 0.02), ValueError);
}

TEST_CASE("slice_rhythm crops on hop boundaries and renormalizes") {
    RhythmCurve curve;
    curve.values = {0.0, 0.2, 1.0, 0.4, 0.1};
    curve.hop_seconds = 0.25;
    curve.duration_seconds = 1.25;

    const RhythmCurve mid = slice_rhythm(curve, 0.5, 1.0);
    CHECK(mid.values == std::vector<double>{1.0, 0.4});
    CHECK(mid.hop_seconds == doctest::Approx(0.25));
    CHECK(mid.duration_seconds == doctest::Approx(0.5));

    const RhythmCurve tail = slice_rhythm(curve, 0.75, 1.25);
    REQUIRE(tail.values.size() == 2);
    CHECK(tail.values[0] == doctest::Approx(1.0));   // 0.4 renormalized
    CHECK(tail.values[1] == doctest::Approx(0.25));  // 0.1 / 0.4

    // Out-of-range requests clamp instead of failing.
    const RhythmCurve over = slice_rhythm(curve, 1.1, 9.0);
    CHECK(over.values.size() == 2);
    CHECK_THROWS_AS(slice_rhythm(curve, 0.5, 0.5), ValueError);
    CHECK_THROWS_AS(slice_rhythm(RhythmCurve{}, 0.0, 1.0), ValueError);
}

TEST_CASE("rhythm cost: correlation identities") {
    const std::vector<double> shape = {0.0, 0.3, 1.0, 0.6, 0.2, 0.5, 0.9, 0.1};
    CHECK(rhythm_cost(shape, shape) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    // Affine images correlate perfectly; mirrored ones anti-correlate.
    std::vector<double> scaled, mirrored;
    for (double v : shape) {
        scaled.push_back(3.0 * v + 0.5);
        mirrored.push_back(1.0 - v);
    }
    CHECK(rhythm_cost(shape, scaled) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    CHECK(rhythm_cost(shape, mirrored) == doctest::Approx(2.0).epsilon(1e-9));

    const std::vector<double> flat(10, 0.7);
    CHECK(rhythm_cost(shape, flat) == 1.0);
    CHECK(rhythm_cost(flat, shape) == 1.0);
    CHECK(rhythm_cost(flat, flat) == 1.0);
    // Single samples count as constant, not as an error.
    CHECK(rhythm_cost({1.0}, shape) == 1.0);
}

TEST_CASE("rhythm cost: symmetric and bounded") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(16), b(24);
        for (double& v : a) v = uni(rng);
        for (double& v : b) v = uni(rng);
        const double ab = rhythm_cost(a, b);
        CHECK(ab == doctest::Approx(rhythm_cost(b, a)).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 2.0);
    }
}

TEST_CASE("rhythm cost: curve overload validates emptiness") {
    StrengthCurve strength{{0.1, 0.9, 0.4}, 25.0, Normalization::unit_max};
    RhythmCurve rhythm;
    rhythm.values = {0.1, 0.9, 0.4};
    rhythm.hop_seconds = 0.02;
    CHECK(rhythm_cost(strength, rhythm) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK_THROWS_AS(rhythm_cost(StrengthCurve{}, rhythm), ValueError);
    CHECK_THROWS_AS(rhythm_cost(strength, RhythmCurve{}), ValueError);
}

TEST_CASE("resample_curve rescales the hop to keep the span") {
    RhythmCurve curve;
    curve.values = {0.0, 1.0, 0.0};
    curve.hop_seconds = 0.02;
    curve.duration_seconds = 0.06;
    const RhythmCurve up = resample_curve(curve, 5);
    CHECK(up.values == std::vector<double>{0.0, 0.5, 1.0, 0.5, 0.0});
    CHECK(up.hop_seconds == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(up.duration_seconds == doctest::Approx(0.06));
}
