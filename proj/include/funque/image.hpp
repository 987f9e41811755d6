#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace funque {

// Row-major 2-D array of doubles. All pixel planes, subbands, and statistic
// maps in the library use this one container.
struct Plane {
    int h = 0, w = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(int h_, int w_, double fill = 0.0) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, fill) {
        if (h_ < 0 || w_ < 0) throw std::invalid_argument("Plane: negative dimensions");
    }

    double& at(int i, int j) { return v[static_cast<size_t>(i) * w + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * w + j]; }

    size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }

    bool same_shape(const Plane& o) const { return h == o.h && w == o.w; }

    // Top-left sub-plane view copy (used for cropping to transform-friendly sizes).
    Plane cropped(int nh, int nw) const {
        if (nh > h || nw > w) throw std::invalid_argument("Plane::cropped: enlarging crop");
        Plane out(nh, nw);
        for (int i = 0; i < nh; ++i)
            for (int j = 0; j < nw; ++j) out.at(i, j) = at(i, j);
        return out;
    }
};

inline double plane_mean(const Plane& p) {
    if (p.empty()) throw std::invalid_argument("plane_mean: empty plane");
    double s = 0.0;
    for (double x : p.v) s += x;
    return s / static_cast<double>(p.size());
}

}  // namespace funque
