#include "mograph/face/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "mograph/errors.hpp"

namespace mograph::face {

void IntentionExpression::validate() const {
    clip.validate();
    for (const auto& frame : clip.frames) {
        for (int c = 0; c < kChannelCount; ++c) {
            if (!upper_face_mask[c] && frame[c] != 0.0) {
                throw ValueError("intention expression '" + tag +
                                 "' is nonzero outside its channel mask");
            }
        }
    }
}

const std::array<bool, kChannelCount>& default_upper_face_mask() {
    static const std::array<bool, kChannelCount> mask = [] {
        std::array<bool, kChannelCount> m{};
        for (int i = 0; i < kChannelCount; ++i) {
            const std::string& name = channel_names()[i];
            m[i] = name.rfind("eye", 0) == 0 || name.rfind("brow", 0) == 0;
        }
        return m;
    }();
    return mask;
}

BlendshapeSequence resample_blendshapes(const BlendshapeSequence& seq, int target_len) {
    if (target_len < 1) throw ValueError("target length must be >= 1");
    if (seq.frames.empty()) throw ValueError("cannot resample an empty sequence");
    BlendshapeSequence out;
    out.fps = seq.fps;
    out.frames.resize(target_len);
    const int last = seq.frame_count() - 1;
    for (int i = 0; i < target_len; ++i) {
        const double u = target_len > 1 ? static_cast<double>(i) / (target_len - 1) : 0.0;
        const double f = u * last;
        const int f0 = static_cast<int>(f);
        const int f1 = std::min(f0 + 1, last);
        const double alpha = f - f0;
        for (int c = 0; c < kChannelCount; ++c) {
            out.frames[i][c] = (1.0 - alpha) * seq.frames[f0][c] + alpha * seq.frames[f1][c];
        }
    }
    return out;
}

BlendshapeSequence fuse_expression(const BlendshapeSequence& rhythmic,
                                   const IntentionExpression& intention, int start_frame,
                                   int end_frame, double fusion_weight, int ramp_frames) {
    const int n = rhythmic.frame_count();
    if (start_frame < 0 || end_frame > n || start_frame >= end_frame) {
        throw SpanError("fusion span outside the sequence");
    }
    if (fusion_weight < 0.0 || fusion_weight > 1.0) {
        throw ValueError("fusion weight must lie in [0,1]");
    }
    if (ramp_frames < 0) throw ValueError("ramp_frames must be non-negative");
    if (intention.clip.frame_count() != end_frame - start_frame) {
        throw LengthMismatchError("intention clip must be resampled to the span length");
    }

    BlendshapeSequence out = rhythmic;
    for (int t = start_frame; t < end_frame; ++t) {
        const double up = static_cast<double>(t - start_frame + 1) / (ramp_frames + 1);
        const double down = static_cast<double>(end_frame - t) / (ramp_frames + 1);
        const double e = std::min({1.0, up, down});
        const double w = fusion_weight * e;
        const BlendshapeFrame& intent = intention.clip.frames[t - start_frame];
        for (int c = 0; c < kChannelCount; ++c) {
            if (!intention.upper_face_mask[c]) continue;
            out.frames[t][c] =
                std::clamp((1.0 - w) * rhythmic.frames[t][c] + w * intent[c], 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace mograph::face
