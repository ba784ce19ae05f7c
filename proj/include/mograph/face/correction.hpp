#pragma once

#include <vector>

#include "mograph/face/blendshapes.hpp"

namespace mograph::face {

// Force the mouth shut on bilabial-stop frames: channels in
// mouth_close_channels are clamped down to 1 - e(t) and channels in
// lip_close_channels clamped up to e(t), where e is 1 on closure frames
// and falls off linearly (1 - d/(ramp_frames+1)) within ramp_frames of
// one. Clamping makes the operation idempotent. Other channels pass
// through untouched.
BlendshapeSequence articulation_correction(
    const BlendshapeSequence& seq, const PhonemeTimeline& ph,
    const std::vector<int>& mouth_close_channels = {kJawOpen}, int ramp_frames = 2,
    const std::vector<int>& lip_close_channels = {kMouthClose});

}  // namespace mograph::face
