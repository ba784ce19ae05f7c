#pragma once

#include <array>
#include <string>

#include "mograph/face/blendshapes.hpp"

namespace mograph::face {

// Pre-captured upper-face clip triggered by a semantic tag. Channels
// outside the mask must be zero.
struct IntentionExpression {
    std::string tag;
    BlendshapeSequence clip;
    std::array<bool, kChannelCount> upper_face_mask{};

    void validate() const;
};

// Every eye* and brow* channel.
const std::array<bool, kChannelCount>& default_upper_face_mask();

// Uniform linear resampling of each channel onto target_len frames.
BlendshapeSequence resample_blendshapes(const BlendshapeSequence& seq, int target_len);

// Inside [start_frame, end_frame) on masked channels:
//   out = (1 - w*e(t)) * rhythmic + w*e(t) * intention
// with e a trapezoid ramping over ramp_frames at both span edges.
// The intention clip must already be resampled to the span length.
BlendshapeSequence fuse_expression(const BlendshapeSequence& rhythmic,
                                   const IntentionExpression& intention, int start_frame,
                                   int end_frame, double fusion_weight, int ramp_frames);

}  // namespace mograph::face
