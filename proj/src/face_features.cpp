#include "mograph/face/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mograph/errors.hpp"

namespace mograph::face {

AudioFeatureMatrix load_audio_features_csv(const std::string& path, double fps) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open audio feature csv " + path);
    AudioFeatureMatrix au;
    au.fps = fps;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, kAudioDims> row{};
        std::istringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= kAudioDims) throw FormatError("audio feature row too wide in " + path);
            double v = 0.0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw FormatError("bad audio feature value '" + cell + "' in " + path);
            }
            row[col++] = v;
        }
        if (col != kAudioDims) {
            throw FormatError("audio feature row needs 39 columns, got " + std::to_string(col));
        }
        au.rows.push_back(row);
    }
    return au;
}

void save_audio_features_csv(const AudioFeatureMatrix& au, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write audio feature csv " + path);
    char buf[32];
    for (const auto& row : au.rows) {
        for (int i = 0; i < kAudioDims; ++i) {
            auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
            out.write(buf, res.ptr - buf);
            out.put(i + 1 < kAudioDims ? ',' : '\n');
        }
    }
}

Eigen::MatrixXd window_features(const AudioFeatureMatrix& au, const PhonemeTimeline& ph,
                                const PhonemeEmbedding& embedding, int t) {
    const int n = au.frame_count();
    if (n == 0) throw ValueError("empty audio feature matrix");
    if (ph.frame_count() != n) {
        throw LengthMismatchError("phoneme timeline and audio features disagree in length");
    }
    if (t < 0 || t >= n) throw IndexError("window center outside the sequence");
    if (embedding.empty()) throw ValueError("empty phoneme embedding");
    const int k = static_cast<int>(embedding.begin()->second.size());
    if (k < 1) throw ValueError("phoneme embedding must have at least 1 dimension");

    Eigen::MatrixXd window(kWindowFrames, kAudioDims + k);
    for (int r = 0; r < kWindowFrames; ++r) {
        const int src = std::clamp(t - kWindowHalf + r, 0, n - 1);
        for (int c = 0; c < kAudioDims; ++c) window(r, c) = au.rows[src][c];
        auto it = embedding.find(ph.labels[src]);
        if (it == embedding.end()) {
            throw ValueError("phoneme '" + ph.labels[src] + "' missing from embedding");
        }
        if (static_cast<int>(it->second.size()) != k) {
            throw ValueError("inconsistent embedding dimensions");
        }
        for (int c = 0; c < k; ++c) window(r, kAudioDims + c) = it->second[c];
    }
    return window;
}

}  // namespace mograph::face
