#include "mograph/face/correction.hpp"

#include <algorithm>
#include <limits>

#include "mograph/errors.hpp"

namespace mograph::face {

BlendshapeSequence articulation_correction(const BlendshapeSequence& seq,
                                           const PhonemeTimeline& ph,
                                           const std::vector<int>& mouth_close_channels,
                                           int ramp_frames,
                                           const std::vector<int>& lip_close_channels) {
    const int n = seq.frame_count();
    if (ph.frame_count() != n) {
        throw LengthMismatchError("phoneme timeline and blendshapes disagree in length");
    }
    if (ramp_frames < 0) throw ValueError("ramp_frames must be non-negative");
    for (int c : mouth_close_channels) {
        if (c < 0 || c >= kChannelCount) throw IndexError("bad mouth-close channel index");
    }
    for (int c : lip_close_channels) {
        if (c < 0 || c >= kChannelCount) throw IndexError("bad lip-close channel index");
    }

    // Distance (in frames) to the nearest closure frame; two sweeps.
    constexpr int kFar = std::numeric_limits<int>::max() / 2;
    std::vector<int> dist(n, kFar);
    for (int t = 0; t < n; ++t) {
        if (ph.closure_set.count(ph.labels[t])) dist[t] = 0;
        else if (t > 0 && dist[t - 1] < kFar) dist[t] = dist[t - 1] + 1;
    }
    for (int t = n - 2; t >= 0; --t) dist[t] = std::min(dist[t], dist[t + 1] + 1);

    BlendshapeSequence out = seq;
    for (int t = 0; t < n; ++t) {
        if (dist[t] > ramp_frames) continue;
        const double e = 1.0 - static_cast<double>(dist[t]) / (ramp_frames + 1);
        for (int c : mouth_close_channels) {
            out.frames[t][c] = std::min(out.frames[t][c], 1.0 - e);
        }
        for (int c : lip_close_channels) {
            out.frames[t][c] = std::max(out.frames[t][c], e);
        }
    }
    return out;
}

}  // namespace mograph::face
