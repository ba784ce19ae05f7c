#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

namespace mograph::face {

inline constexpr int kChannelCount = 52;

using BlendshapeFrame = std::array<double, kChannelCount>;

// ARKit channel order; jawOpen and mouthClose sit at fixed indices.
const std::array<std::string, kChannelCount>& channel_names();
int channel_index(const std::string& name);  // throws ValueError on unknown names

inline constexpr int kJawOpen = 17;
inline constexpr int kMouthClose = 18;

struct BlendshapeSequence {
    std::vector<BlendshapeFrame> frames;  // weights in [0,1]
    double fps = 25.0;

    int frame_count() const { return static_cast<int>(frames.size()); }
    void validate() const;  // fps > 0, weights within [0,1]
    bool operator==(const BlendshapeSequence& other) const = default;
};

// CSV with a 52-name header row, one frame per row.
BlendshapeSequence load_blendshape_csv(const std::string& path, double fps = 25.0);
void save_blendshape_csv(const BlendshapeSequence& seq, const std::string& path);

struct PhonemeInterval {
    double start_seconds = 0.0;
    double end_seconds = 0.0;
    std::string phoneme;
};

// Per-frame phoneme labels aligned to a BlendshapeSequence; empty string
// marks silence. closure_set lists the bilabial stops that force the
// mouth shut.
struct PhonemeTimeline {
    std::vector<std::string> labels;
    std::set<std::string> closure_set = {"b", "m", "p"};

    int frame_count() const { return static_cast<int>(labels.size()); }
};

// TSV rows: start_seconds <TAB> end_seconds <TAB> phoneme.
std::vector<PhonemeInterval> load_phoneme_tsv(const std::string& path);
void save_phoneme_tsv(const std::vector<PhonemeInterval>& intervals, const std::string& path);

// Label of the interval containing each frame center (t + 0.5) / fps.
PhonemeTimeline rasterize_phonemes(const std::vector<PhonemeInterval>& intervals,
                                   int frame_count, double fps);

}  // namespace mograph::face
