#pragma once

#include "funque/stats.hpp"
#include "funque/transform.hpp"

namespace funque {

// Shared knobs of the information-theoretic features: uniform window size and
// stride for the local statistics, and the neural-noise variance added to
// every signal variance.
struct InfoConfig {
    int window = 9;
    int stride = 1;
    double sigma_nsq = 2.0;
};

// Gain/noise decomposition of the distorted-given-reference channel Y = gX + N:
// g = cov/var_x (zero where the reference patch is flat), residual variance
// var_y - g*cov clamped at zero.
struct GsmChannel {
    Plane g, sigma_v_sq;
};
GsmChannel fit_gsm_channel(const LocalStats& s, double var_floor = 1e-10);

// Ratio of received to transmitted information, summed over the approximation
// band at one level. A blank reference (zero denominator) scores 1.
double vif_a(const WaveletPyramid& px, const WaveletPyramid& py, int level, const InfoConfig& cfg);

// Same ratio accumulated over the H and V detail bands of all levels <= L.
double vif_hv(const WaveletPyramid& px, const WaveletPyramid& py, int levels, const InfoConfig& cfg);

// Mean absolute difference of information-weighted entropies
//   h = log(1 + var) * log(2*pi*e*(var + sigma_n^2))
// over the approximation band (A variant) or all H/V bands up to L (HV).
double srred_a(const WaveletPyramid& px, const WaveletPyramid& py, int level, const InfoConfig& cfg);
double srred_hv(const WaveletPyramid& px, const WaveletPyramid& py, int levels, const InfoConfig& cfg);

// Temporal analogue on frame-difference subbands; the weight combines the
// current frame's spatial variance with the difference variance:
//   g = log(1 + var) * log(1 + dvar) * log(2*pi*e*(dvar + sigma_n^2)).
// Undefined for the first frame (no predecessor) - callers skip it.
double trred_a(const WaveletPyramid& prev_px, const WaveletPyramid& px, const WaveletPyramid& prev_py,
               const WaveletPyramid& py, int level, const InfoConfig& cfg);
double trred_hv(const WaveletPyramid& prev_px, const WaveletPyramid& px, const WaveletPyramid& prev_py,
                const WaveletPyramid& py, int levels, const InfoConfig& cfg);

}  // namespace funque
