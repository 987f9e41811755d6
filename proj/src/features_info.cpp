#include "funque/features_info.hpp"

#include <cmath>
#include <stdexcept>

namespace funque {

static constexpr double kTwoPiE = 17.079468445347132;  // 2*pi*e

GsmChannel fit_gsm_channel(const LocalStats& s, double var_floor) {
    GsmChannel ch;
    ch.g = Plane(s.var_x.h, s.var_x.w);
    ch.sigma_v_sq = Plane(s.var_x.h, s.var_x.w);
    for (size_t i = 0; i < s.var_x.size(); ++i) {
        double g = s.var_x.v[i] < var_floor ? 0.0 : s.cov_xy.v[i] / s.var_x.v[i];
        double sv = s.var_y.v[i] - g * s.cov_xy.v[i];
        ch.g.v[i] = g;
        ch.sigma_v_sq.v[i] = sv < 0 ? 0.0 : sv;
    }
    return ch;
}

// Adds one subband pair's contribution to the information sums. Reference
// variances under the flat-patch floor count as zero on BOTH sides so that an
// identical pair yields numerator == denominator bit-for-bit.
static void vif_terms(const Plane& x, const Plane& y, const InfoConfig& cfg, double& num, double& den) {
    const double var_floor = 1e-10;
    LocalStats s = local_stats(x, y, cfg.window, cfg.stride);
    GsmChannel ch = fit_gsm_channel(s, var_floor);
    for (size_t i = 0; i < s.var_x.size(); ++i) {
        double g = ch.g.v[i];
        double vx = s.var_x.v[i] < var_floor ? 0.0 : s.var_x.v[i];
        num += std::log(1.0 + g * g * vx / (ch.sigma_v_sq.v[i] + cfg.sigma_nsq));
        den += std::log(1.0 + vx / cfg.sigma_nsq);
    }
}

static double vif_ratio(double num, double den) { return den == 0.0 ? 1.0 : num / den; }

double vif_a(const WaveletPyramid& px, const WaveletPyramid& py, int level, const InfoConfig& cfg) {
    double num = 0.0, den = 0.0;
    vif_terms(px.level(level).a, py.level(level).a, cfg, num, den);
    return vif_ratio(num, den);
}

double vif_hv(const WaveletPyramid& px, const WaveletPyramid& py, int levels, const InfoConfig& cfg) {
    double num = 0.0, den = 0.0;
    for (int lam = 1; lam <= levels; ++lam) {
        vif_terms(px.level(lam).h, py.level(lam).h, cfg, num, den);
        vif_terms(px.level(lam).v, py.level(lam).v, cfg, num, den);
    }
    return vif_ratio(num, den);
}

static void srred_terms(const Plane& x, const Plane& y, const InfoConfig& cfg, double& abs_sum, long& count) {
    LocalStats s = local_stats(x, y, cfg.window, cfg.stride);
    for (size_t i = 0; i < s.var_x.size(); ++i) {
        double hx = std::log(1.0 + s.var_x.v[i]) * std::log(kTwoPiE * (s.var_x.v[i] + cfg.sigma_nsq));
        double hy = std::log(1.0 + s.var_y.v[i]) * std::log(kTwoPiE * (s.var_y.v[i] + cfg.sigma_nsq));
        abs_sum += std::abs(hx - hy);
    }
    count += static_cast<long>(s.var_x.size());
}

double srred_a(const WaveletPyramid& px, const WaveletPyramid& py, int level, const InfoConfig& cfg) {
    double sum = 0.0;
    long n = 0;
    srred_terms(px.level(level).a, py.level(level).a, cfg, sum, n);
    return sum / static_cast<double>(n);
}

double srred_hv(const WaveletPyramid& px, const WaveletPyramid& py, int levels, const InfoConfig& cfg) {
    double sum = 0.0;
    long n = 0;
    for (int lam = 1; lam <= levels; ++lam) {
        srred_terms(px.level(lam).h, py.level(lam).h, cfg, sum, n);
        srred_terms(px.level(lam).v, py.level(lam).v, cfg, sum, n);
    }
    return sum / static_cast<double>(n);
}

static Plane diff_plane(const Plane& cur, const Plane& prev) {
    if (!cur.same_shape(prev)) throw std::runtime_error("trred: frame subband shapes changed between frames");
    Plane d(cur.h, cur.w);
    for (size_t i = 0; i < d.size(); ++i) d.v[i] = cur.v[i] - prev.v[i];
    return d;
}

static void trred_terms(const Plane& x_prev, const Plane& x, const Plane& y_prev, const Plane& y, const InfoConfig& cfg,
                        double& abs_sum, long& count) {
    LocalStats spatial = local_stats(x, y, cfg.window, cfg.stride);
    LocalStats temporal = local_stats(diff_plane(x, x_prev), diff_plane(y, y_prev), cfg.window, cfg.stride);
    for (size_t i = 0; i < spatial.var_x.size(); ++i) {
        double gx = std::log(1.0 + spatial.var_x.v[i]) * std::log(1.0 + temporal.var_x.v[i]) *
                    std::log(kTwoPiE * (temporal.var_x.v[i] + cfg.sigma_nsq));
        double gy = std::log(1.0 + spatial.var_y.v[i]) * std::log(1.0 + temporal.var_y.v[i]) *
                    std::log(kTwoPiE * (temporal.var_y.v[i] + cfg.sigma_nsq));
        abs_sum += std::abs(gx - gy);
    }
    count += static_cast<long>(spatial.var_x.size());
}

double trred_a(const WaveletPyramid& prev_px, const WaveletPyramid& px, const WaveletPyramid& prev_py,
               const WaveletPyramid& py, int level, const InfoConfig& cfg) {
    double sum = 0.0;
    long n = 0;
    trred_terms(prev_px.level(level).a, px.level(level).a, prev_py.level(level).a, py.level(level).a, cfg, sum, n);
    return sum / static_cast<double>(n);
}

double trred_hv(const WaveletPyramid& prev_px, const WaveletPyramid& px, const WaveletPyramid& prev_py,
                const WaveletPyramid& py, int levels, const InfoConfig& cfg) {
    double sum = 0.0;
    long n = 0;
    for (int lam = 1; lam <= levels; ++lam) {
        trred_terms(prev_px.level(lam).h, px.level(lam).h, prev_py.level(lam).h, py.level(lam).h, cfg, sum, n);
        trred_terms(prev_px.level(lam).v, px.level(lam).v, prev_py.level(lam).v, py.level(lam).v, cfg, sum, n);
    }
    return sum / static_cast<double>(n);
}

}  // namespace funque
