#pragma once

#include <vector>

#include "funque/csf.hpp"
#include "funque/image.hpp"

namespace funque {

// The shared front end every feature consumes: optional viewing-distance
// downscale, CSF weighting (as a prefilter or as subband weights), and an
// L-level recursive Haar decomposition.
struct TransformConfig {
    int levels = 2;
    CsfMethodName csf = CsfMethodName::NadenauSW;
    bool use_sast = true;
    double dh_ratio = 3.0;

    void validate() const;
};

struct LevelBands {
    Plane a, h, v, d;
};

struct WaveletPyramid {
    std::vector<LevelBands> levels;  // levels[0] is the finest scale (level 1)

    const LevelBands& level(int lam) const { return levels[lam - 1]; }
    int depth() const { return static_cast<int>(levels.size()); }
};

// round(dh_ratio / golden ratio), at least 1.
int sast_factor(double dh_ratio);

// Disjoint factor x factor block means; trailing remainder rows/cols cropped.
Plane sast_downscale(const Plane& p, int factor);

// One Haar level: per 2x2 block [a b; c d],
//   A=(a+b+c+d)/2, H=(a-b+c-d)/2, V=(a+b-c-d)/2, D=(a-b-c+d)/2.
// Orthonormal: per-block energy is conserved. Dimensions must be even.
LevelBands haar_dwt(const Plane& p);

// Separable symmetric-kernel convolution with mirror boundary extension.
Plane convolve_separable(const Plane& p, const std::vector<double>& taps);

// 1-D high-pass [+1,-1]/sqrt(2) along rows (horizontal) or columns (vertical),
// mirror extension at the leading edge: out(0) = 0.
Plane haar_highpass_rows(const Plane& p);
Plane haar_highpass_cols(const Plane& p);

// Full pipeline: [SAST] -> crop to multiple of 2^L -> [spatial CSF] -> L-level
// Haar -> [subband weights]. Exactly one CSF form applies per method.
WaveletPyramid unified_transform(const Plane& p, const TransformConfig& cfg, Channel ch, const CsfParams& params);

}  // namespace funque
