#pragma once

#include <utility>

#include "funque/transform.hpp"

namespace funque {

// First-order gradient energy H^2 + V^2 at one level.
Plane grad_energy1(const LevelBands& b);
// Second-order energy: H re-filtered with the Haar high-pass along rows, V
// along columns, squared and summed.
Plane grad_energy2(const LevelBands& b);

// Spatial-activity index: population std of sqrt(E1), raised to 1/4.
double tl_sai(const WaveletPyramid& pyr, int level);

// Blur indicator: mean of E2's largest 1% over mean of E1's largest 1%
// (counts round up, at least one element); a blank frame scores 0.
double tl_blur(const WaveletPyramid& pyr, int level);

// reference value - distorted value of either no-reference index.
double delta_tl_sai(const WaveletPyramid& px, const WaveletPyramid& py, int level);
double delta_tl_blur(const WaveletPyramid& px, const WaveletPyramid& py, int level);

// Mean absolute difference between two approximation bands (same level).
double mad_between(const Plane& a, const Plane& b);

// Detail-attenuation / detail-addition pair at one level:
//   blur = mean over positions of (sum_theta |X|-|Y|)^+,
//   edge = same with roles swapped. The clip applies after the band sum.
std::pair<double, double> blur_edge(const WaveletPyramid& px, const WaveletPyramid& py, int level);

}  // namespace funque
