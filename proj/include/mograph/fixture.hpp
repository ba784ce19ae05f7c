#pragma once

#include <cstdint>
#include <string>

namespace mograph {

// Desk-scale synthetic stand-in for a captured motion database: sinusoidal
// arm/spine motion over a 17-joint skeleton, tagged gesture clips, a timed
// word script whose phrases carry matching keywords, and a click-track WAV
// whose onset amplitudes follow per-phrase shape profiles. Byte-identical
// for a fixed seed.
struct FixtureSpec {
    std::uint32_t seed = 0;
    int n_clips = 10;     // non-semantic clips, >= 1
    int n_semantic = 2;   // tagged clips, >= 0
    double clip_seconds = 4.0;
    double fps = 25.0;
    int sample_rate = 16000;
};

struct FixturePaths {
    std::string database_dir;
    std::string manifest;
    std::string lexicon;
    std::string script;
    std::string wav;
    std::string config;
};

FixturePaths generate_fixture(const FixtureSpec& spec, const std::string& out_dir);

}  // namespace mograph
