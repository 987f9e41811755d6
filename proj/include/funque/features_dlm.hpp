#pragma once

#include <array>

#include "funque/transform.hpp"

namespace funque {

// Decoupling of the distorted detail coefficients Y = gamma*X + A into a
// restored part (detail surviving distortion, possibly enhanced) and an
// additive-impairment part. The split is driven by the gradient-direction
// difference between the two frames: directions within 1 degree keep the raw
// gain (contrast enhancement preserved); otherwise the gain is clipped to [0,1].
struct DecoupledBands {
    std::array<Plane, 3> rhat;  // restored, order H,V,D
    std::array<Plane, 3> ahat;  // additive, same order; rhat + ahat == Y exactly
};

DecoupledBands decouple(const WaveletPyramid& px, const WaveletPyramid& py, int level);

// Contrast-masking threshold: |ahat| summed over the three detail bands,
// filtered with the 3x3 kernel [1 1 1; 1 2 1; 1 1 1]/30 (zero extension).
Plane dlm_mask(const DecoupledBands& d);

// Ratio of masked restored detail to reference detail, pooled over the central
// ~80% x 80% region with cube-root Minkowski sums:
//   sum_theta (sum |R|~^3)^(1/3) / sum_theta (sum |X|^3)^(1/3),
// where |R|~ = max(|rhat| - mask, 0). A blank reference level scores 1.
double dlm_scale(const WaveletPyramid& px, const WaveletPyramid& py, int level);

}  // namespace funque
