#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "funque/image.hpp"
#include "funque/media_io.hpp"
#include "funque/transform.hpp"

namespace testutil {

inline funque::Plane random_plane(int h, int w, std::uint32_t seed, double lo = 0.0, double hi = 255.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    funque::Plane p(h, w);
    for (double& x : p.v) x = d(rng);
    return p;
}

// Integer-valued samples: survive an 8-bit file round trip exactly.
inline funque::Plane random_pixels(int h, int w, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    funque::Plane p(h, w);
    for (double& x : p.v) x = d(rng);
    return p;
}

// Straight-line reference for one Haar level, written independently of the
// library: per 2x2 block [a b; c d], A=(a+b+c+d)/2, H=(a-b+c-d)/2,
// V=(a+b-c-d)/2, D=(a-b-c+d)/2.
inline funque::LevelBands naive_haar(const funque::Plane& p) {
    funque::LevelBands out;
    out.a = funque::Plane(p.h / 2, p.w / 2);
    out.h = funque::Plane(p.h / 2, p.w / 2);
    out.v = funque::Plane(p.h / 2, p.w / 2);
    out.d = funque::Plane(p.h / 2, p.w / 2);
    for (int i = 0; i < p.h / 2; ++i) {
        for (int j = 0; j < p.w / 2; ++j) {
            double a = p.at(2 * i, 2 * j), b = p.at(2 * i, 2 * j + 1);
            double c = p.at(2 * i + 1, 2 * j), d = p.at(2 * i + 1, 2 * j + 1);
            out.a.at(i, j) = (a + b + c + d) / 2;
            out.h.at(i, j) = (a - b + c - d) / 2;
            out.v.at(i, j) = (a + b - c - d) / 2;
            out.d.at(i, j) = (a - b - c + d) / 2;
        }
    }
    return out;
}

inline double max_abs_diff(const funque::Plane& a, const funque::Plane& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

// Fresh scratch directory under the system temp root.
inline std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("funque_test_" + tag);
    std::filesystem::create_directories(dir);
    return dir.string();
}

// Smooth drifting content: a few sinusoids whose phases advance with t, so
// consecutive frames differ (temporal features are nondegenerate) while the
// signal stays band-limited enough for quality features to behave sensibly.
inline funque::FramePlanes synth_frame(int h, int w, int t, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> freq(0.01, 0.12), phase(0.0, 6.28), vel(0.05, 0.4);
    struct Sine {
        double fi, fj, ph, vl, amp;
    };
    std::vector<Sine> sines;
    for (int k = 0; k < 4; ++k) sines.push_back({freq(rng), freq(rng), phase(rng), vel(rng), 18.0 + 10.0 * k});
    auto field = [&](int i, int j, double scale) {
        double s = 0.0;
        for (const Sine& sn : sines) s += sn.amp * std::sin(6.283185307179586 * (sn.fi * i + sn.fj * j) * scale + sn.ph + sn.vl * t);
        return s;
    };
    funque::FramePlanes f;
    f.y = funque::Plane(h, w);
    f.cb = funque::Plane(h / 2, w / 2);
    f.cr = funque::Plane(h / 2, w / 2);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) f.y.at(i, j) = std::round(std::clamp(128.0 + field(i, j, 1.0), 0.0, 255.0));
    for (int i = 0; i < h / 2; ++i)
        for (int j = 0; j < w / 2; ++j) {
            f.cb.at(i, j) = std::round(std::clamp(128.0 + 0.5 * field(i, j, 2.0), 0.0, 255.0));
            f.cr.at(i, j) = std::round(std::clamp(128.0 - 0.4 * field(j, i, 2.0), 0.0, 255.0));
        }
    return f;
}

inline void write_synth_video(const std::string& path, int frames, int h, int w, std::uint32_t seed) {
    for (int t = 0; t < frames; ++t) funque::write_yuv_frame(path, synth_frame(h, w, t, seed), 8, t > 0);
}

}  // namespace testutil
