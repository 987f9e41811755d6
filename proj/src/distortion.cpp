#include "funque/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "funque/transform.hpp"

namespace funque {

std::string distortion_name(DistortionKind k) {
    switch (k) {
        case DistortionKind::GaussianNoise: return "gaussian_noise";
        case DistortionKind::GaussianBlur: return "gaussian_blur";
        case DistortionKind::UniformQuantize: return "uniform_quantize";
    }
    throw std::logic_error("distortion_name: bad kind");
}

DistortionKind parse_distortion(const std::string& s) {
    if (s == "gaussian_noise") return DistortionKind::GaussianNoise;
    if (s == "gaussian_blur") return DistortionKind::GaussianBlur;
    if (s == "uniform_quantize") return DistortionKind::UniformQuantize;
    throw std::invalid_argument("unknown distortion '" + s +
                                "' (expected gaussian_noise, gaussian_blur, or uniform_quantize)");
}

double NormalSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller: u1 in (0,1], u2 in [0,1), both from the top 53 bits.
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Plane gaussian_noise(const Plane& p, double sigma, NormalSampler& ns) {
    if (sigma < 0) throw std::invalid_argument("gaussian_noise: negative sigma");
    if (sigma == 0) return p;
    Plane out = p;
    for (double& x : out.v) x = std::clamp(x + sigma * ns.next(), 0.0, 255.0);
    return out;
}

Plane gaussian_blur(const Plane& p, double sigma) {
    if (sigma < 0) throw std::invalid_argument("gaussian_blur: negative sigma");
    if (sigma == 0) return p;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double t = std::exp(-0.5 * (i / sigma) * (i / sigma));
        taps[radius + i] = t;
        sum += t;
    }
    for (double& t : taps) t /= sum;
    return convolve_separable(p, taps);
}

Plane uniform_quantize(const Plane& p, double step) {
    if (step <= 0) throw std::invalid_argument("uniform_quantize: step must be positive");
    Plane out = p;
    for (double& x : out.v) x = std::clamp(std::round(x / step) * step, 0.0, 255.0);
    return out;
}

FramePlanes distort_frame(const FramePlanes& f, DistortionKind k, double severity, std::uint64_t seed) {
    FramePlanes out;
    switch (k) {
        case DistortionKind::GaussianNoise: {
            NormalSampler ns(seed);
            out.y = gaussian_noise(f.y, severity, ns);
            out.cb = gaussian_noise(f.cb, severity, ns);
            out.cr = gaussian_noise(f.cr, severity, ns);
            break;
        }
        case DistortionKind::GaussianBlur:
            out.y = gaussian_blur(f.y, severity);
            out.cb = gaussian_blur(f.cb, severity);
            out.cr = gaussian_blur(f.cr, severity);
            break;
        case DistortionKind::UniformQuantize:
            out.y = uniform_quantize(f.y, severity);
            out.cb = uniform_quantize(f.cb, severity);
            out.cr = uniform_quantize(f.cr, severity);
            break;
    }
    return out;
}

}  // namespace funque
