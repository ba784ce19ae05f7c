#pragma once

#include "mograph/face/blendshapes.hpp"

namespace mograph::face {

// Shape term: sum over frames of the Euclidean distance between the two
// 52-vectors. Motion term: the same distance between frame-to-frame
// deltas, summed from the second frame on. Zero iff the sequences match.
double lip_loss(const BlendshapeSequence& pred, const BlendshapeSequence& gt);

// 1 - SSIM over the flattened sequences, with population statistics:
//   SSIM = (2*mu*mu' + d1)(2*cov + d2) / ((mu^2 + mu'^2 + d1)(var + var' + d2))
// Identical sequences score 0; range (-1, 1].
double ssim_loss(const BlendshapeSequence& pred, const BlendshapeSequence& gt,
                 double delta1 = 1e-4, double delta2 = 9e-4);

}  // namespace mograph::face
