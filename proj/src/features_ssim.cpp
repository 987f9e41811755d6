#include "funque/features_ssim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace funque {

static void check_pair(const WaveletPyramid& px, const WaveletPyramid& py, int levels, const char* who) {
    if (px.depth() < levels || py.depth() < levels)
        throw std::runtime_error(std::string(who) + ": pyramids shallower than requested level");
    for (int lam = 1; lam <= levels; ++lam)
        if (!px.level(lam).a.same_shape(py.level(lam).a))
            throw std::runtime_error(std::string(who) + ": pyramid shape mismatch at level " + std::to_string(lam));
}

// Per-position sum of squared detail coefficients, scaled by 2^-2l.
static Plane detail_energy(const LevelBands& b, int level) {
    double scale = std::ldexp(1.0, -2 * level);
    Plane out(b.h.h, b.h.w);
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = scale * (b.h.v[i] * b.h.v[i] + b.v.v[i] * b.v.v[i] + b.d.v[i] * b.d.v[i]);
    return out;
}

static Plane detail_product(const LevelBands& bx, const LevelBands& by, int level) {
    double scale = std::ldexp(1.0, -2 * level);
    Plane out(bx.h.h, bx.h.w);
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = scale * (bx.h.v[i] * by.h.v[i] + bx.v.v[i] * by.v.v[i] + bx.d.v[i] * by.d.v[i]);
    return out;
}

// Quarter of the 2x2 block sum: the carry-over term of the refinement.
static Plane block_quarter_sum(const Plane& p) {
    Plane out(p.h / 2, p.w / 2);
    for (int i = 0; i < out.h; ++i)
        for (int j = 0; j < out.w; ++j)
            out.at(i, j) =
                0.25 * (p.at(2 * i, 2 * j) + p.at(2 * i, 2 * j + 1) + p.at(2 * i + 1, 2 * j) + p.at(2 * i + 1, 2 * j + 1));
    return out;
}

ScaleStats scale_stats(const WaveletPyramid& px, const WaveletPyramid& py, int levels) {
    check_pair(px, py, levels, "scale_stats");
    ScaleStats s;
    for (int lam = 1; lam <= levels; ++lam) {
        const LevelBands& bx = px.level(lam);
        const LevelBands& by = py.level(lam);
        double mu_scale = std::ldexp(1.0, -lam);
        Plane mx(bx.a.h, bx.a.w), my(bx.a.h, bx.a.w);
        for (size_t i = 0; i < mx.size(); ++i) {
            mx.v[i] = mu_scale * bx.a.v[i];
            my.v[i] = mu_scale * by.a.v[i];
        }
        Plane vx = detail_energy(bx, lam);
        Plane vy = detail_energy(by, lam);
        Plane cxy = detail_product(bx, by, lam);
        if (lam > 1) {
            Plane carry_x = block_quarter_sum(s.var_x.back());
            Plane carry_y = block_quarter_sum(s.var_y.back());
            Plane carry_c = block_quarter_sum(s.cov_xy.back());
            for (size_t i = 0; i < vx.size(); ++i) {
                vx.v[i] += carry_x.v[i];
                vy.v[i] += carry_y.v[i];
                cxy.v[i] += carry_c.v[i];
            }
        }
        for (size_t i = 0; i < vx.size(); ++i) {
            if (vx.v[i] < 0) vx.v[i] = 0;
            if (vy.v[i] < 0) vy.v[i] = 0;
        }
        s.mu_x.push_back(std::move(mx));
        s.mu_y.push_back(std::move(my));
        s.var_x.push_back(std::move(vx));
        s.var_y.push_back(std::move(vy));
        s.cov_xy.push_back(std::move(cxy));
    }
    return s;
}

Plane luminance_map(const ScaleStats& s, int level, double K1) {
    const Plane& mx = s.mu_x[level - 1];
    const Plane& my = s.mu_y[level - 1];
    Plane out(mx.h, mx.w);
    for (size_t i = 0; i < out.size(); ++i)
        out.v[i] = (2.0 * mx.v[i] * my.v[i] + K1) / (mx.v[i] * mx.v[i] + my.v[i] * my.v[i] + K1);
    return out;
}

Plane cs_map(const ScaleStats& s, int level, double K2) {
    const Plane& vx = s.var_x[level - 1];
    const Plane& vy = s.var_y[level - 1];
    const Plane& c = s.cov_xy[level - 1];
    Plane out(vx.h, vx.w);
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = (2.0 * c.v[i] + K2) / (vx.v[i] + vy.v[i] + K2);
    return out;
}

double pool(const Plane& map, PoolMethod method) {
    if (map.empty()) throw std::runtime_error("pool: empty map");
    double mean = plane_mean(map);
    if (method == PoolMethod::Mean) return mean;
    double ss = 0.0;
    for (double x : map.v) {
        double d = x - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(map.size()));
    if (mean == 0.0) {
        if (sd == 0.0) return 0.0;
        throw std::runtime_error("pool: CoV of a zero-mean map with nonzero dispersion");
    }
    return sd / mean;
}

std::vector<double> ms_exponents(int levels) {
    static const double canonical[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    if (levels < 1 || levels > 5) throw std::runtime_error("ms_exponents: levels must be in 1..5");
    std::vector<double> a(canonical, canonical + levels);
    double sum = 0.0;
    for (double x : a) sum += x;
    for (double& x : a) x /= sum;
    return a;
}

static Plane lcs_map(const ScaleStats& s, int level, const SsimConstants& c) {
    Plane l = luminance_map(s, level, c.K1);
    Plane cs = cs_map(s, level, c.K2);
    for (size_t i = 0; i < l.size(); ++i) l.v[i] *= cs.v[i];
    return l;
}

double wavelet_ssim(const ScaleStats& s, int levels, const SsimConstants& c) {
    return pool(lcs_map(s, levels, c), PoolMethod::Mean);
}

double wavelet_essim(const ScaleStats& s, int levels, const SsimConstants& c) {
    return pool(lcs_map(s, levels, c), PoolMethod::CoV);
}

// Bases can only go negative on strongly anticorrelated content; the real-power
// product needs them nonnegative, so they are floored at zero.
static double ms_product(const ScaleStats& s, int levels, const SsimConstants& c, PoolMethod method) {
    std::vector<double> alpha = ms_exponents(levels);
    double prod = 1.0;
    for (int lam = 1; lam < levels; ++lam) {
        double base = pool(cs_map(s, lam, c.K2), method);
        prod *= std::pow(base < 0 ? 0.0 : base, alpha[lam - 1]);
    }
    double final_base = pool(lcs_map(s, levels, c), method);
    prod *= std::pow(final_base < 0 ? 0.0 : final_base, alpha[levels - 1]);
    return prod;
}

double ms_ssim(const ScaleStats& s, int levels, const SsimConstants& c) {
    return ms_product(s, levels, c, PoolMethod::Mean);
}

double ms_essim(const ScaleStats& s, int levels, const SsimConstants& c) {
    return ms_product(s, levels, c, PoolMethod::CoV);
}

}  // namespace funque
