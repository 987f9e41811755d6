#pragma once

#include "funque/image.hpp"

namespace funque {

// Summed-area table with a zero first row/column: i(r,c) holds the sum of all
// source samples above-left of (r,c) exclusive. Accumulated in double.
struct IntegralImage {
    int h = 0, w = 0;             // source dimensions
    std::vector<double> v;        // (h+1) x (w+1)

    double at(int i, int j) const { return v[static_cast<size_t>(i) * (w + 1) + j]; }
    double& at(int i, int j) { return v[static_cast<size_t>(i) * (w + 1) + j]; }
};

IntegralImage integral_image(const Plane& x);

// Sums over k x k windows anchored at every stride-th position:
//   S(i,j) = sum of x[i..i+k, j..j+k) for output position (i/stride, j/stride).
Plane window_sum(const IntegralImage& I, int k, int stride);

// Local first/second moments of a pair of planes over k x k windows.
// Variances are clamped at zero (cancellation guard); covariance is not.
struct LocalStats {
    Plane mu_x, mu_y, var_x, var_y, cov_xy;
    int k = 0;
};

LocalStats local_stats(const Plane& x, const Plane& y, int k, int stride);

}  // namespace funque
