#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mograph/face/blendshapes.hpp"

namespace mograph::face {

inline constexpr int kMfccDims = 13;
inline constexpr int kMfbDims = 26;
inline constexpr int kAudioDims = kMfccDims + kMfbDims;  // 39
inline constexpr int kWindowFrames = 25;                 // 1 s at 25 fps
inline constexpr int kWindowHalf = 12;

// Per-frame audio feature rows: 13 MFCC values followed by 26 MFB values.
struct AudioFeatureMatrix {
    std::vector<std::array<double, kAudioDims>> rows;
    double fps = 25.0;

    int frame_count() const { return static_cast<int>(rows.size()); }
};

// Headerless CSV, exactly 39 numeric columns per row.
AudioFeatureMatrix load_audio_features_csv(const std::string& path, double fps = 25.0);
void save_audio_features_csv(const AudioFeatureMatrix& au, const std::string& path);

using PhonemeEmbedding = std::map<std::string, std::vector<double>>;

// 25 x (39 + k) matrix: rows t-12 .. t+12 (edge-clamped), each row the
// audio features concatenated with the embedding of that row's phoneme.
Eigen::MatrixXd window_features(const AudioFeatureMatrix& au, const PhonemeTimeline& ph,
                                const PhonemeEmbedding& embedding, int t);

}  // namespace mograph::face
