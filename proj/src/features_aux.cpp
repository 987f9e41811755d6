#include "funque/features_aux.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace funque {

Plane grad_energy1(const LevelBands& b) {
    Plane out(b.h.h, b.h.w);
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = b.h.v[i] * b.h.v[i] + b.v.v[i] * b.v.v[i];
    return out;
}

Plane grad_energy2(const LevelBands& b) {
    Plane hh = haar_highpass_rows(b.h);
    Plane vv = haar_highpass_cols(b.v);
    Plane out(hh.h, hh.w);
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = hh.v[i] * hh.v[i] + vv.v[i] * vv.v[i];
    return out;
}

double tl_sai(const WaveletPyramid& pyr, int level) {
    Plane e1 = grad_energy1(pyr.level(level));
    for (double& x : e1.v) x = std::sqrt(x);
    double mean = plane_mean(e1);
    double ss = 0.0;
    for (double x : e1.v) {
        double d = x - mean;
        ss += d * d;
    }
    return std::pow(std::sqrt(ss / static_cast<double>(e1.size())), 0.25);
}

// Mean of the map's largest ceil(1%) values.
static double top_percentile_mean(Plane map) {
    size_t n = map.size();
    size_t count = (n + 99) / 100;
    if (count < 1) count = 1;
    std::nth_element(map.v.begin(), map.v.begin() + (n - count), map.v.end());
    double s = 0.0;
    for (size_t i = n - count; i < n; ++i) s += map.v[i];
    return s / static_cast<double>(count);
}

double tl_blur(const WaveletPyramid& pyr, int level) {
    double e1 = top_percentile_mean(grad_energy1(pyr.level(level)));
    if (e1 == 0.0) return 0.0;
    double e2 = top_percentile_mean(grad_energy2(pyr.level(level)));
    return e2 / e1;
}

double delta_tl_sai(const WaveletPyramid& px, const WaveletPyramid& py, int level) {
    return tl_sai(px, level) - tl_sai(py, level);
}

double delta_tl_blur(const WaveletPyramid& px, const WaveletPyramid& py, int level) {
    return tl_blur(px, level) - tl_blur(py, level);
}

double mad_between(const Plane& a, const Plane& b) {
    if (!a.same_shape(b)) throw std::runtime_error("mad_between: shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::abs(a.v[i] - b.v[i]);
    return s / static_cast<double>(a.size());
}

std::pair<double, double> blur_edge(const WaveletPyramid& px, const WaveletPyramid& py, int level) {
    const LevelBands& bx = px.level(level);
    const LevelBands& by = py.level(level);
    if (!bx.h.same_shape(by.h)) throw std::runtime_error("blur_edge: shape mismatch");
    const Plane* xs[3] = {&bx.h, &bx.v, &bx.d};
    const Plane* ys[3] = {&by.h, &by.v, &by.d};
    double blur = 0.0, edge = 0.0;
    size_t n = bx.h.size();
    for (size_t i = 0; i < n; ++i) {
        double diff = 0.0;
        for (int t = 0; t < 3; ++t) diff += std::abs(xs[t]->v[i]) - std::abs(ys[t]->v[i]);
        if (diff > 0)
            blur += diff;
        else
            edge -= diff;
    }
    return {blur / static_cast<double>(n), edge / static_cast<double>(n)};
}

}  // namespace funque
