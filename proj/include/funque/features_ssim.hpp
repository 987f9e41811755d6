#pragma once

#include "funque/image.hpp"
#include "funque/transform.hpp"

namespace funque {

// Additive stabilizers of the luminance and contrast-structure terms, on the
// shared [0,255] sample scale: (0.01*255)^2 and (0.03*255)^2.
struct SsimConstants {
    double K1 = 6.5025;
    double K2 = 58.5225;
};

// Disjoint-block statistics of the two input frames at every scale, derived
// entirely from wavelet coefficients: means from the approximation bands,
// variances/covariances by the iterative refinement
//   var_1    = 2^-2 * sum_theta X_1^2
//   var_l+1  = 2^-2 * (2x2 block sum of var_l) + 2^-2(l+1) * sum_theta X_(l+1)^2
// which reproduces the direct per-block sums exactly.
struct ScaleStats {
    std::vector<Plane> mu_x, mu_y, var_x, var_y, cov_xy;  // index 0 = level 1

    int depth() const { return static_cast<int>(mu_x.size()); }
};

ScaleStats scale_stats(const WaveletPyramid& px, const WaveletPyramid& py, int levels);

// l = (2 mu_x mu_y + K1) / (mu_x^2 + mu_y^2 + K1)
Plane luminance_map(const ScaleStats& s, int level, double K1);
// cs = (2 cov + K2) / (var_x + var_y + K2)
Plane cs_map(const ScaleStats& s, int level, double K2);

enum class PoolMethod { Mean, CoV };

// Mean = arithmetic mean. CoV = population std / mean (0 for a zero map; a zero
// mean with nonzero dispersion is a numeric error). CoV-pooled scores are
// dissimilarity-oriented: 0 means a perfect match.
double pool(const Plane& map, PoolMethod method);

// Exponents for the multi-scale products: the canonical five-scale weights
// (0.0448, 0.2856, 0.3001, 0.2363, 0.1333) finest-to-coarsest, first L kept and
// renormalized to sum 1.
std::vector<double> ms_exponents(int levels);

// Single-scale scores at level L (l*cs map pooled by Mean / CoV).
double wavelet_ssim(const ScaleStats& s, int levels, const SsimConstants& c);
double wavelet_essim(const ScaleStats& s, int levels, const SsimConstants& c);

// Multi-scale products: levels 1..L-1 contribute pooled cs, level L the pooled
// l*cs, each raised to its exponent. The CoV form is 0 for identical frames.
double ms_ssim(const ScaleStats& s, int levels, const SsimConstants& c);
double ms_essim(const ScaleStats& s, int levels, const SsimConstants& c);

}  // namespace funque
