#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "funque/image.hpp"
#include "funque/media_io.hpp"

namespace funque {

// Synthetic distortion generators for monotonicity analysis. All are
// deterministic for a fixed seed: the noise path draws from an explicit
// Box-Muller transform over mt19937_64 so sequences do not depend on any
// library's distribution implementation.

enum class DistortionKind { GaussianNoise, GaussianBlur, UniformQuantize };

std::string distortion_name(DistortionKind k);
DistortionKind parse_distortion(const std::string& s);  // gaussian_noise | gaussian_blur | uniform_quantize

class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    // Standard normal deviate; Box-Muller pairs, second value cached.
    double next();

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Adds N(0, sigma^2) per pixel and clamps to [0, 255]. sigma = 0 returns the
// input untouched (no draws), keeping the identity case exact.
Plane gaussian_noise(const Plane& p, double sigma, NormalSampler& ns);

// Separable Gaussian with radius ceil(3*sigma), unit-sum taps, mirror
// boundary. sigma = 0 returns the input untouched.
Plane gaussian_blur(const Plane& p, double sigma);

// Mid-tread quantizer round(x/step)*step, clamped to [0, 255]. step <= 1 on
// integer-valued input is the identity.
Plane uniform_quantize(const Plane& p, double step);

// Applies one distortion at the given severity (noise sigma, blur sigma, or
// quantizer step) to all three planes; the noise stream is seeded once and
// consumed in y, cb, cr order.
FramePlanes distort_frame(const FramePlanes& f, DistortionKind k, double severity, std::uint64_t seed);

}  // namespace funque
