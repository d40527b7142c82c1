#pragma once

#include <optional>

#include "volsr/volume.hpp"

namespace volsr {

/// Peak signal-to-noise ratio in dB: 10*log10(peak^2 / MSE). When `peak` is
/// absent it defaults to the maximum of `reference`. Zero MSE reports +inf.
double psnr(const Volume3D& reference, const Volume3D& estimate,
            std::optional<double> peak = std::nullopt);

double mse(const Volume3D& a, const Volume3D& b);

}  // namespace volsr
