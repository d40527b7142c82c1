#include "volsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace volsr {

double mse(const Volume3D& a, const Volume3D& b) {
    require_same_dims(a.dims(), b.dims(), "mse");
    double acc = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double d = a[p] - b[p];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const Volume3D& reference, const Volume3D& estimate, std::optional<double> peak) {
    require_same_dims(reference.dims(), estimate.dims(), "psnr");
    double p = peak ? *peak : *std::max_element(reference.data().begin(), reference.data().end());
    if (p <= 0.0) throw std::invalid_argument("psnr: peak must be positive");
    const double err = mse(reference, estimate);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p * p / err);
}

}  // namespace volsr
