#pragma once

#include <vector>

#include "mograph/motion_clip.hpp"
#include "mograph/wav.hpp"

namespace mograph {

// Per-frame onset strength of a speech signal, unit-max normalized
// (all-zero for silence). The audio-side counterpart of StrengthCurve.
struct RhythmCurve {
    std::vector<double> values;
    double hop_seconds = 0.0;
    double duration_seconds = 0.0;

    bool operator==(const RhythmCurve& other) const = default;
};

// Half-wave-rectified spectral flux per hop. The analysis window is
// 2*hop samples (Hann), left-aligned at each hop; magnitudes come from a
// zero-padded FFT of at least 2048 samples. Frame 0 keeps its full
// spectral energy so an onset at t=0 registers.
RhythmCurve onset_envelope(const AudioBuffer& audio, double hop_seconds = 0.02);

// Sub-curve covering [start_seconds, end_seconds), re-normalized to unit max.
RhythmCurve slice_rhythm(const RhythmCurve& curve, double start_seconds, double end_seconds);

// 1 - Pearson correlation after resampling both curves to 64 samples.
// Either curve constant => correlation taken as 0 => cost 1. Range [0, 2].
double rhythm_cost(const StrengthCurve& node_strength, const RhythmCurve& phrase_rhythm);
double rhythm_cost(const std::vector<double>& a, const std::vector<double>& b);

RhythmCurve resample_curve(const RhythmCurve& curve, int target_len);

}  // namespace mograph
