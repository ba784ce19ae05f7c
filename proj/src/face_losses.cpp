#include "mograph/face/losses.hpp"

#include <cmath>

#include "mograph/errors.hpp"

namespace mograph::face {

namespace {

double frame_distance(const BlendshapeFrame& a, const BlendshapeFrame& b) {
    double sum = 0.0;
    for (int i = 0; i < kChannelCount; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

}  // namespace

double lip_loss(const BlendshapeSequence& pred, const BlendshapeSequence& gt) {
    if (pred.frame_count() != gt.frame_count()) {
        throw LengthMismatchError("lip loss needs equally long sequences");
    }
    const int n = pred.frame_count();
    if (n < 2) throw ValueError("lip loss needs at least 2 frames");

    double shape = 0.0;
    for (int t = 0; t < n; ++t) shape += frame_distance(pred.frames[t], gt.frames[t]);

    double motion = 0.0;
    for (int t = 1; t < n; ++t) {
        double sum = 0.0;
        for (int i = 0; i < kChannelCount; ++i) {
            const double dp = pred.frames[t][i] - pred.frames[t - 1][i];
            const double dg = gt.frames[t][i] - gt.frames[t - 1][i];
            sum += (dp - dg) * (dp - dg);
        }
        motion += std::sqrt(sum);
    }
    return shape + motion;
}

double ssim_loss(const BlendshapeSequence& pred, const BlendshapeSequence& gt, double delta1,
                 double delta2) {
    if (pred.frame_count() != gt.frame_count()) {
        throw LengthMismatchError("ssim loss needs equally long sequences");
    }
    const int n = pred.frame_count();
    if (n == 0) throw ValueError("ssim loss needs at least 1 frame");

    const double count = static_cast<double>(n) * kChannelCount;
    double mp = 0.0, mg = 0.0;
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < kChannelCount; ++i) {
            mp += pred.frames[t][i];
            mg += gt.frames[t][i];
        }
    }
    mp /= count;
    mg /= count;

    double vp = 0.0, vg = 0.0, cov = 0.0;
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < kChannelCount; ++i) {
            const double dp = pred.frames[t][i] - mp;
            const double dg = gt.frames[t][i] - mg;
            vp += dp * dp;
            vg += dg * dg;
            cov += dp * dg;
        }
    }
    vp /= count;
    vg /= count;
    cov /= count;

    const double ssim = (2.0 * mp * mg + delta1) * (2.0 * cov + delta2) /
                        ((mp * mp + mg * mg + delta1) * (vp + vg + delta2));
    return 1.0 - ssim;
}

}  // namespace mograph::face
