#include "funque/features_dlm.hpp"

#include <cmath>
#include <stdexcept>

namespace funque {

static constexpr double kRad2Deg = 57.295779513082320877;

DecoupledBands decouple(const WaveletPyramid& px, const WaveletPyramid& py, int level) {
    const LevelBands& bx = px.level(level);
    const LevelBands& by = py.level(level);
    if (!bx.h.same_shape(by.h)) throw std::runtime_error("decouple: pyramid shape mismatch");

    int h = bx.h.h, w = bx.h.w;
    DecoupledBands out;
    for (auto* arr : {&out.rhat, &out.ahat})
        for (auto& p : *arr) p = Plane(h, w);

    const Plane* xs[3] = {&bx.h, &bx.v, &bx.d};
    const Plane* ys[3] = {&by.h, &by.v, &by.d};
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            // Gradient direction from the first-order detail pair; atan2(0,0)=0
            // keeps blank positions on the unclipped branch.
            double psi_x = std::atan2(bx.v.at(i, j), bx.h.at(i, j)) * kRad2Deg;
            double psi_y = std::atan2(by.v.at(i, j), by.h.at(i, j)) * kRad2Deg;
            bool keep_gain = std::abs(psi_x - psi_y) < 1.0;
            for (int t = 0; t < 3; ++t) {
                double X = xs[t]->at(i, j);
                double Y = ys[t]->at(i, j);
                double gamma;
                if (X == 0.0) {
                    gamma = 0.0;
                } else {
                    gamma = Y / X;
                    if (!keep_gain) gamma = gamma < 0.0 ? 0.0 : (gamma > 1.0 ? 1.0 : gamma);
                }
                double r = gamma * X;
                out.rhat[t].at(i, j) = r;
                out.ahat[t].at(i, j) = Y - r;
            }
        }
    return out;
}

Plane dlm_mask(const DecoupledBands& d) {
    int h = d.ahat[0].h, w = d.ahat[0].w;
    // Sum of additive-impairment magnitudes across the three detail bands.
    Plane acc(h, w);
    for (const Plane& a : d.ahat)
        for (size_t i = 0; i < acc.size(); ++i) acc.v[i] += std::abs(a.v[i]);
    // 3x3 kernel, center counted twice, normalized by 30; zero outside the map.
    Plane m(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            double s = acc.at(i, j);  // the extra center count
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < h && jj >= 0 && jj < w) s += acc.at(ii, jj);
                }
            m.at(i, j) = s / 30.0;
        }
    return m;
}

double dlm_scale(const WaveletPyramid& px, const WaveletPyramid& py, int level) {
    DecoupledBands d = decouple(px, py, level);
    Plane mask = dlm_mask(d);
    const LevelBands& bx = px.level(level);
    const Plane* xs[3] = {&bx.h, &bx.v, &bx.d};

    int h = mask.h, w = mask.w;
    int mi = static_cast<int>(0.1 * h), mj = static_cast<int>(0.1 * w);  // border margin per side
    double num = 0.0, den = 0.0;
    for (int t = 0; t < 3; ++t) {
        double nsum = 0.0, dsum = 0.0;
        for (int i = mi; i < h - mi; ++i)
            for (int j = mj; j < w - mj; ++j) {
                double r = std::abs(d.rhat[t].at(i, j)) - mask.at(i, j);
                if (r > 0) nsum += r * r * r;
                double x = std::abs(xs[t]->at(i, j));
                dsum += x * x * x;
            }
        num += std::cbrt(nsum);
        den += std::cbrt(dsum);
    }
    return den == 0.0 ? 1.0 : num / den;
}

}  // namespace funque
