#include "funque/stats.hpp"

#include <stdexcept>
#include <string>

namespace funque {

IntegralImage integral_image(const Plane& x) {
    IntegralImage I;
    I.h = x.h;
    I.w = x.w;
    I.v.assign(static_cast<size_t>(x.h + 1) * (x.w + 1), 0.0);
    for (int i = 0; i < x.h; ++i) {
        double row = 0.0;
        for (int j = 0; j < x.w; ++j) {
            row += x.at(i, j);
            I.at(i + 1, j + 1) = I.at(i, j + 1) + row;
        }
    }
    return I;
}

Plane window_sum(const IntegralImage& I, int k, int stride) {
    if (k < 1 || k > I.h || k > I.w) throw std::runtime_error("window_sum: k out of range");
    if (stride < 1) throw std::runtime_error("window_sum: stride must be >= 1");
    int oh = (I.h - k) / stride + 1;
    int ow = (I.w - k) / stride + 1;
    Plane out(oh, ow);
    for (int i = 0; i < oh; ++i) {
        int r = i * stride;
        for (int j = 0; j < ow; ++j) {
            int c = j * stride;
            out.at(i, j) = I.at(r + k, c + k) - I.at(r, c + k) - I.at(r + k, c) + I.at(r, c);
        }
    }
    return out;
}

LocalStats local_stats(const Plane& x, const Plane& y, int k, int stride) {
    if (!x.same_shape(y)) throw std::runtime_error("local_stats: shape mismatch");
    Plane xx(x.h, x.w), yy(x.h, x.w), xy(x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) {
        xx.v[i] = x.v[i] * x.v[i];
        yy.v[i] = y.v[i] * y.v[i];
        xy.v[i] = x.v[i] * y.v[i];
    }
    double inv_k2 = 1.0 / (static_cast<double>(k) * k);
    LocalStats s;
    s.k = k;
    s.mu_x = window_sum(integral_image(x), k, stride);
    s.mu_y = window_sum(integral_image(y), k, stride);
    s.var_x = window_sum(integral_image(xx), k, stride);
    s.var_y = window_sum(integral_image(yy), k, stride);
    s.cov_xy = window_sum(integral_image(xy), k, stride);
    for (size_t i = 0; i < s.mu_x.size(); ++i) {
        s.mu_x.v[i] *= inv_k2;
        s.mu_y.v[i] *= inv_k2;
        double vx = s.var_x.v[i] * inv_k2 - s.mu_x.v[i] * s.mu_x.v[i];
        double vy = s.var_y.v[i] * inv_k2 - s.mu_y.v[i] * s.mu_y.v[i];
        s.var_x.v[i] = vx < 0 ? 0.0 : vx;
        s.var_y.v[i] = vy < 0 ? 0.0 : vy;
        s.cov_xy.v[i] = s.cov_xy.v[i] * inv_k2 - s.mu_x.v[i] * s.mu_y.v[i];
    }
    return s;
}

}  // namespace funque
