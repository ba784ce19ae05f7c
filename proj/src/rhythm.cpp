#include "mograph/rhythm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "mograph/errors.hpp"

namespace mograph {

RhythmCurve onset_envelope(const AudioBuffer& audio, double hop_seconds) {
    if (audio.sample_rate < 8000) throw ValueError("sample rate must be >= 8000");
    if (hop_seconds < 0.01 || hop_seconds > 0.1) throw ValueError("hop must be in [0.01, 0.1] s");
    if (audio.samples.empty()) throw ValueError("empty audio");

    const int sr = audio.sample_rate;
    const long n = static_cast<long>(audio.samples.size());
    const long hop = std::lround(hop_seconds * sr);
    const long win = 2 * hop;
    long fft_len = 2048;
    while (fft_len < win) fft_len *= 2;

    std::vector<double> hann(win);
    for (long i = 0; i < win; ++i) {
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (win - 1)));
    }

    const long n_frames = (n + hop - 1) / hop;
    Eigen::FFT<double> fft;
    std::vector<double> buf(fft_len);
    std::vector<std::complex<double>> spectrum;
    std::vector<double> prev_mag, mag(fft_len / 2 + 1);

    RhythmCurve curve;
    curve.hop_seconds = static_cast<double>(hop) / sr;
    curve.duration_seconds = static_cast<double>(n) / sr;
    curve.values.resize(n_frames);

    for (long h = 0; h < n_frames; ++h) {
        const long start = h * hop;
        std::fill(buf.begin(), buf.end(), 0.0);
        for (long i = 0; i < win && start + i < n; ++i) {
            buf[i] = audio.samples[start + i] * hann[i];
        }
        fft.fwd(spectrum, buf);
        for (long k = 0; k <= fft_len / 2; ++k) mag[k] = std::abs(spectrum[k]);

        double flux = 0.0;
        if (h == 0) {
            for (double m : mag) flux += m;
        } else {
            for (long k = 0; k <= fft_len / 2; ++k) flux += std::max(0.0, mag[k] - prev_mag[k]);
        }
        curve.values[h] = flux;
        prev_mag = mag;
    }

    const double peak = *std::max_element(curve.values.begin(), curve.values.end());
    if (peak > 0.0) {
        for (double& v : curve.values) v /= peak;
    }
    return curve;
}

RhythmCurve slice_rhythm(const RhythmCurve& curve, double start_seconds, double end_seconds) {
    if (!(start_seconds < end_seconds)) throw ValueError("rhythm slice needs start < end");
    if (curve.values.size() < 2 || curve.hop_seconds <= 0.0) {
        throw ValueError("rhythm curve too short to slice");
    }
    const long n = static_cast<long>(curve.values.size());
    long first = static_cast<long>(std::floor(start_seconds / curve.hop_seconds));
    long last = static_cast<long>(std::ceil(end_seconds / curve.hop_seconds));
    first = std::clamp(first, 0L, n - 2);
    last = std::clamp(last, first + 2, n);  // at least two samples

    RhythmCurve out;
    out.hop_seconds = curve.hop_seconds;
    out.values.assign(curve.values.begin() + first, curve.values.begin() + last);
    out.duration_seconds = out.values.size() * curve.hop_seconds;
    const double peak = *std::max_element(out.values.begin(), out.values.end());
    if (peak > 0.0) {
        for (double& v : out.values) v /= peak;
    }
    return out;
}

double rhythm_cost(const std::vector<double>& a, const std::vector<double>& b) {
    constexpr int kSamples = 64;
    if (a.size() < 2 || b.size() < 2) return 1.0;  // single-sample curves are constant
    const std::vector<double> x = resample_values(a, kSamples);
    const std::vector<double> y = resample_values(b, kSamples);

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= kSamples;
    my /= kSamples;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 1e-24 || syy <= 1e-24) return 1.0;  // constant curve: correlation taken as 0
    return 1.0 - sxy / std::sqrt(sxx * syy);
}

double rhythm_cost(const StrengthCurve& node_strength, const RhythmCurve& phrase_rhythm) {
    if (node_strength.values.empty() || phrase_rhythm.values.empty()) {
        throw ValueError("rhythm_cost needs non-empty curves");
    }
    return rhythm_cost(node_strength.values, phrase_rhythm.values);
}

RhythmCurve resample_curve(const RhythmCurve& curve, int target_len) {
    RhythmCurve out;
    out.values = resample_values(curve.values, target_len);
    out.duration_seconds = curve.duration_seconds;
    const long n = static_cast<long>(curve.values.size());
    out.hop_seconds = n > 1 ? curve.hop_seconds * static_cast<double>(n - 1) / (target_len - 1)
                            : curve.hop_seconds;
    return out;
}

}  // namespace mograph
