#pragma once

#include <cstdint>
#include <optional>

#include "volsr/operators.hpp"

namespace volsr {

enum class PhantomKind { NestedEllipsoids, RandomSmooth, Constant };

/// Synthetic HR ground truth. nested-ellipsoids is piecewise constant in
/// [0,1] with a dark interior channel; random-smooth is low-pass-filtered
/// seeded noise rescaled to [0,1]; constant fills with `constant_value`.
/// Deterministic per (kind, dims, seed).
Volume3D make_phantom(const Dims3& dims, PhantomKind kind, std::uint64_t seed = 0,
                      double constant_value = 0.5);

/// Generator identifier recorded with every synthetic run: mt19937_64 driving
/// a Box-Muller transform, (u1,u2) = (r >> 11) * 2^-53 per draw.
inline constexpr const char* kNoiseAlgorithm = "mt19937_64-boxmuller";

/// Zero-mean unit-variance Gaussian field from the documented generator.
Volume3D gaussian_noise(const Dims3& dims, std::uint64_t seed);

struct DegradationRecipe {
    PsfSpec psf;
    DecimationSpec spec;
    std::optional<double> bsnr_db;  // absent = noiseless
    std::uint64_t rng_seed = 0;
};

struct DegradeResult {
    Volume3D y;
    double noise_sigma = 0.0;  // 0 when noiseless
};

/// y = decimate(blur(x)) + n with the noise level calibrated so that
/// 10*log10(var(DHx)/sigma^2) equals bsnr_db; the variance is taken over the
/// mean-removed blurred-decimated signal.
DegradeResult degrade(const Volume3D& x, const DegradationRecipe& recipe);

}  // namespace volsr
