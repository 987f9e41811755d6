#include <cmath>

#include "doctest.h"
#include "funque/features_info.hpp"
#include "helpers.hpp"

using namespace funque;

namespace {

WaveletPyramid oracle_pyramid(const Plane& p, int levels) {
    WaveletPyramid pyr;
    Plane cur = p;
    for (int l = 0; l < levels; ++l) {
        LevelBands b = testutil::naive_haar(cur);
        cur = b.a;
        pyr.levels.push_back(std::move(b));
    }
    return pyr;
}

// Straight-line sliding-window moments (no integral images).
void naive_window_stats(const Plane& x, const Plane& y, int k, Plane& var_x, Plane& var_y, Plane& cov) {
    int oh = x.h - k + 1, ow = x.w - k + 1;
    var_x = Plane(oh, ow);
    var_y = Plane(oh, ow);
    cov = Plane(oh, ow);
    const double n = static_cast<double>(k) * k;
    for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    double xv = x.at(i + a, j + b), yv = y.at(i + a, j + b);
                    sx += xv;
                    sy += yv;
                    sxx += xv * xv;
                    syy += yv * yv;
                    sxy += xv * yv;
                }
            double vx = sxx / n - (sx / n) * (sx / n);
            double vy = syy / n - (sy / n) * (sy / n);
            var_x.at(i, j) = vx < 0 ? 0 : vx;
            var_y.at(i, j) = vy < 0 ? 0 : vy;
            cov.at(i, j) = sxy / n - (sx / n) * (sy / n);
        }
}

// Information ratio over one band pair computed from first principles.
void oracle_vif_terms(const Plane& x, const Plane& y, const InfoConfig& cfg, double& num, double& den) {
    Plane vx, vy, cov;
    naive_window_stats(x, y, cfg.window, vx, vy, cov);
    for (size_t i = 0; i < vx.v.size(); ++i) {
        double g = vx.v[i] < 1e-10 ? 0.0 : cov.v[i] / vx.v[i];
        double sv = vy.v[i] - g * cov.v[i];
        if (sv < 0) sv = 0;
        double varx = vx.v[i] < 1e-10 ? 0.0 : vx.v[i];
        num += std::log(1.0 + g * g * varx / (sv + cfg.sigma_nsq));
        den += std::log(1.0 + varx / cfg.sigma_nsq);
    }
}

constexpr double kTwoPiE = 17.079468445347132;

}  // namespace

TEST_CASE("gsm channel: gain and residual variance") {
    Plane x = testutil::random_plane(24, 24, 11);
    Plane y = x;
    for (double& v : y.v) v = 0.5 * v + 3.0;  // y = 0.5 x + const: exact gain 0.5, zero residual
    LocalStats s = local_stats(x, y, 9, 1);
    GsmChannel ch = fit_gsm_channel(s);
    for (size_t i = 0; i < ch.g.v.size(); ++i) {
        CHECK(ch.g.v[i] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(ch.sigma_v_sq.v[i] <= 1e-7);
        CHECK(ch.sigma_v_sq.v[i] >= 0.0);
    }

    // Flat reference patches get zero gain, residual = distorted variance.
    Plane flat(16, 16, 9.0);
    Plane noisy = testutil::random_plane(16, 16, 12);
    LocalStats s2 = local_stats(flat, noisy, 9, 1);
    GsmChannel ch2 = fit_gsm_channel(s2);
    for (size_t i = 0; i < ch2.g.v.size(); ++i) {
        CHECK(ch2.g.v[i] == 0.0);
        CHECK(ch2.sigma_v_sq.v[i] == doctest::Approx(s2.var_y.v[i]).epsilon(1e-12));
    }
}

TEST_CASE("vif matches the first-principles oracle") {
    InfoConfig cfg;
    Plane x = testutil::random_plane(48, 48, 21);
    Plane y = testutil::random_plane(48, 48, 22);
    const int L = 2;
    WaveletPyramid px = oracle_pyramid(x, L), py = oracle_pyramid(y, L);

    for (int lam = 1; lam <= L; ++lam) {
        double num = 0, den = 0;
        oracle_vif_terms(px.level(lam).a, py.level(lam).a, cfg, num, den);
        CHECK(vif_a(px, py, lam, cfg) == doctest::Approx(num / den).epsilon(1e-9));
    }
    double num = 0, den = 0;
    for (int lam = 1; lam <= L; ++lam) {
        oracle_vif_terms(px.level(lam).h, py.level(lam).h, cfg, num, den);
        oracle_vif_terms(px.level(lam).v, py.level(lam).v, cfg, num, den);
    }
    CHECK(vif_hv(px, py, L, cfg) == doctest::Approx(num / den).epsilon(1e-9));
}

TEST_CASE("vif identity is exactly one; blank reference scores one") {
    InfoConfig cfg;
    Plane x = testutil::random_plane(48, 48, 31);
    WaveletPyramid px = oracle_pyramid(x, 2), py = oracle_pyramid(x, 2);
    CHECK(vif_a(px, py, 1, cfg) == 1.0);
    CHECK(vif_a(px, py, 2, cfg) == 1.0);
    CHECK(vif_hv(px, py, 2, cfg) == 1.0);

    Plane flat(32, 32, 128.0);
    Plane other = testutil::random_plane(32, 32, 32);
    WaveletPyramid pf = oracle_pyramid(flat, 1), po = oracle_pyramid(other, 1);
    // Reference detail bands are all zero -> den == 0 -> defined as 1.
    CHECK(vif_hv(pf, po, 1, cfg) == 1.0);
}

TEST_CASE("srred matches its definition and vanishes on identity") {
    InfoConfig cfg;
    Plane x = testutil::random_plane(48, 48, 41);
    Plane y = testutil::random_plane(48, 48, 42);
    WaveletPyramid px = oracle_pyramid(x, 1), py = oracle_pyramid(y, 1);

    Plane vx, vy, cov;
    naive_window_stats(px.level(1).a, py.level(1).a, cfg.window, vx, vy, cov);
    double sum = 0;
    for (size_t i = 0; i < vx.v.size(); ++i) {
        double hx = std::log(1.0 + vx.v[i]) * std::log(kTwoPiE * (vx.v[i] + cfg.sigma_nsq));
        double hy = std::log(1.0 + vy.v[i]) * std::log(kTwoPiE * (vy.v[i] + cfg.sigma_nsq));
        sum += std::abs(hx - hy);
    }
    CHECK(srred_a(px, py, 1, cfg) == doctest::Approx(sum / vx.v.size()).epsilon(1e-9));
    CHECK(srred_a(px, px, 1, cfg) == 0.0);
    CHECK(srred_hv(px, px, 1, cfg) == 0.0);
}

TEST_CASE("trred combines spatial and difference variances; identity is zero") {
    InfoConfig cfg;
    Plane x0 = testutil::random_plane(48, 48, 51);
    Plane x1 = testutil::random_plane(48, 48, 52);
    Plane y0 = testutil::random_plane(48, 48, 53);
    Plane y1 = testutil::random_plane(48, 48, 54);
    WaveletPyramid px0 = oracle_pyramid(x0, 1), px1 = oracle_pyramid(x1, 1);
    WaveletPyramid py0 = oracle_pyramid(y0, 1), py1 = oracle_pyramid(y1, 1);

    auto diff = [](const Plane& a, const Plane& b) {
        Plane d = a;
        for (size_t i = 0; i < d.v.size(); ++i) d.v[i] -= b.v[i];
        return d;
    };
    Plane sx, sy, sc, dx, dy, dc;
    naive_window_stats(px1.level(1).a, py1.level(1).a, cfg.window, sx, sy, sc);
    naive_window_stats(diff(px1.level(1).a, px0.level(1).a), diff(py1.level(1).a, py0.level(1).a), cfg.window, dx, dy,
                       dc);
    double sum = 0;
    for (size_t i = 0; i < sx.v.size(); ++i) {
        double gx = std::log(1.0 + sx.v[i]) * std::log(1.0 + dx.v[i]) * std::log(kTwoPiE * (dx.v[i] + cfg.sigma_nsq));
        double gy = std::log(1.0 + sy.v[i]) * std::log(1.0 + dy.v[i]) * std::log(kTwoPiE * (dy.v[i] + cfg.sigma_nsq));
        sum += std::abs(gx - gy);
    }
    CHECK(trred_a(px0, px1, py0, py1, 1, cfg) == doctest::Approx(sum / sx.v.size()).epsilon(1e-9));

    // Identical videos: same bands, same differences -> zero.
    CHECK(trred_a(px0, px1, px0, px1, 1, cfg) == 0.0);
    CHECK(trred_hv(px0, px1, px0, px1, 1, cfg) == 0.0);

    // Mismatched shapes between consecutive frames are a caller bug.
    WaveletPyramid small = oracle_pyramid(testutil::random_plane(24, 24, 55), 1);
    CHECK_THROWS(trred_a(small, px1, py0, py1, 1, cfg));
}

TEST_CASE("distortion strictly moves vif down and srred up") {
    InfoConfig cfg;
    Plane x = testutil::random_plane(64, 64, 61);
    WaveletPyramid px = oracle_pyramid(x, 1);
    double prev_vif = 1.0, prev_srred = 0.0;
    for (double sigma : {5.0, 15.0, 40.0}) {
        Plane y = x;
        std::mt19937 rng(static_cast<unsigned>(sigma));
        std::normal_distribution<double> n(0.0, sigma);
        for (double& v : y.v) v = std::clamp(v + n(rng), 0.0, 255.0);
        WaveletPyramid py = oracle_pyramid(y, 1);
        double vif = vif_a(px, py, 1, cfg);
        double sr = srred_a(px, py, 1, cfg);
        CHECK(vif < prev_vif);
        CHECK(sr > prev_srred);
        prev_vif = vif;
        prev_srred = sr;
    }
}
