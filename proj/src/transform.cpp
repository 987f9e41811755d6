#include "funque/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace funque {

void TransformConfig::validate() const {
    if (levels < 1 || levels > 4)
        throw std::runtime_error("TransformConfig: levels must be in 1..4, got " + std::to_string(levels));
    if (!(dh_ratio > 0)) throw std::runtime_error("TransformConfig: dh_ratio must be positive");
}

int sast_factor(double dh_ratio) {
    if (!(dh_ratio > 0)) throw std::runtime_error("sast_factor: dh_ratio must be positive");
    long f = std::lround(dh_ratio / 1.618);
    return f < 1 ? 1 : static_cast<int>(f);
}

Plane sast_downscale(const Plane& p, int factor) {
    if (factor < 1) throw std::runtime_error("sast_downscale: factor must be >= 1");
    if (factor == 1) return p;
    int oh = p.h / factor, ow = p.w / factor;
    Plane out(oh, ow);
    double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
            double s = 0.0;
            for (int bi = 0; bi < factor; ++bi)
                for (int bj = 0; bj < factor; ++bj) s += p.at(i * factor + bi, j * factor + bj);
            out.at(i, j) = s * inv;
        }
    return out;
}

LevelBands haar_dwt(const Plane& p) {
    if (p.h % 2 != 0 || p.w % 2 != 0) throw std::runtime_error("haar_dwt: dimensions must be even");
    int oh = p.h / 2, ow = p.w / 2;
    LevelBands b{Plane(oh, ow), Plane(oh, ow), Plane(oh, ow), Plane(oh, ow)};
    for (int i = 0; i < oh; ++i) {
        const double* r0 = &p.v[static_cast<size_t>(2 * i) * p.w];
        const double* r1 = r0 + p.w;
        for (int j = 0; j < ow; ++j) {
            double a = r0[2 * j], bb = r0[2 * j + 1], c = r1[2 * j], d = r1[2 * j + 1];
            b.a.at(i, j) = 0.5 * (a + bb + c + d);
            b.h.at(i, j) = 0.5 * (a - bb + c - d);
            b.v.at(i, j) = 0.5 * (a + bb - c - d);
            b.d.at(i, j) = 0.5 * (a - bb - c + d);
        }
    }
    return b;
}

// Mirror index: reflects without repeating the edge sample's neighbor order
// (…, p(1), p(0) | p(0), p(1), …).
static inline int mirror(int i, int n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
    return i;
}

Plane convolve_separable(const Plane& p, const std::vector<double>& taps) {
    if (taps.empty() || taps.size() % 2 == 0) throw std::runtime_error("convolve_separable: kernel must be odd-length");
    int half = static_cast<int>(taps.size()) / 2;
    // Rows pass.
    Plane tmp(p.h, p.w);
    for (int i = 0; i < p.h; ++i)
        for (int j = 0; j < p.w; ++j) {
            double acc = 0.0;
            for (int t = -half; t <= half; ++t) acc += taps[t + half] * p.at(i, mirror(j + t, p.w));
            tmp.at(i, j) = acc;
        }
    // Columns pass.
    Plane out(p.h, p.w);
    for (int i = 0; i < p.h; ++i)
        for (int j = 0; j < p.w; ++j) {
            double acc = 0.0;
            for (int t = -half; t <= half; ++t) acc += taps[t + half] * tmp.at(mirror(i + t, p.h), j);
            out.at(i, j) = acc;
        }
    return out;
}

static constexpr double kInvSqrt2 = 0.70710678118654752440;

Plane haar_highpass_rows(const Plane& p) {
    Plane out(p.h, p.w);
    for (int i = 0; i < p.h; ++i)
        for (int j = 0; j < p.w; ++j) {
            double prev = p.at(i, j > 0 ? j - 1 : 0);
            out.at(i, j) = (p.at(i, j) - prev) * kInvSqrt2;
        }
    return out;
}

Plane haar_highpass_cols(const Plane& p) {
    Plane out(p.h, p.w);
    for (int i = 0; i < p.h; ++i)
        for (int j = 0; j < p.w; ++j) {
            double prev = p.at(i > 0 ? i - 1 : 0, j);
            out.at(i, j) = (p.at(i, j) - prev) * kInvSqrt2;
        }
    return out;
}

WaveletPyramid unified_transform(const Plane& plane, const TransformConfig& cfg, Channel ch, const CsfParams& params) {
    cfg.validate();
    CsfRealization csf = realize_csf(cfg.csf, ch, cfg.levels, cfg.dh_ratio, params);

    Plane work = plane;
    if (cfg.use_sast) {
        int f = sast_factor(cfg.dh_ratio);
        if (f > 1) work = sast_downscale(work, f);
    }

    int block = 1 << cfg.levels;
    int ch_ = (work.h / block) * block;
    int cw = (work.w / block) * block;
    if (ch_ == 0 || cw == 0)
        throw std::runtime_error("unified_transform: input too small for " + std::to_string(cfg.levels) +
                                 " levels (got " + std::to_string(work.h) + "x" + std::to_string(work.w) + ")");
    if (ch_ != work.h || cw != work.w) work = work.cropped(ch_, cw);

    if (csf.kind == CsfKind::SpatialFilter) work = convolve_separable(work, csf.filter.taps);

    WaveletPyramid pyr;
    pyr.levels.reserve(cfg.levels);
    Plane cur = std::move(work);
    for (int lam = 1; lam <= cfg.levels; ++lam) {
        LevelBands b = haar_dwt(cur);
        cur = b.a;  // recurse on the approximation band
        pyr.levels.push_back(std::move(b));
    }

    if (csf.kind == CsfKind::SubbandWeights) {
        for (int lam = 1; lam <= cfg.levels; ++lam) {
            LevelBands& b = pyr.levels[lam - 1];
            struct {
                Plane* p;
                Subband th;
            } bands[4] = {{&b.a, Subband::A}, {&b.h, Subband::H}, {&b.v, Subband::V}, {&b.d, Subband::D}};
            for (auto& band : bands) {
                double wgt = csf.weights.at(lam, band.th);
                if (wgt == 1.0) continue;
                for (double& x : band.p->v) x *= wgt;
            }
        }
    }
    return pyr;
}

}  // namespace funque
