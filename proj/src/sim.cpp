#include "volsr/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace volsr {

namespace {

// Piecewise-constant intensity palette; the channel is assigned last so it
// cuts through the inner bodies (a dark tube, endodontic-style).
struct Ellipsoid {
    double cx, cy, cz;  // center in [-1,1]^3
    double ax, ay, az;  // semi-axes
    double value;
};

double unit_coord(std::size_t idx, std::size_t extent) {
    return 2.0 * (static_cast<double>(idx) + 0.5) / static_cast<double>(extent) - 1.0;
}

Volume3D nested_ellipsoids(const Dims3& dims) {
    if (dims.m < 8 || dims.n < 8 || dims.s < 8)
        throw std::invalid_argument("make_phantom: nested-ellipsoids needs dims >= 8 per axis");

    const Ellipsoid bodies[] = {
        {0.0, 0.0, 0.0, 0.88, 0.82, 0.92, 1.00},   // dense outer body
        {0.1, -0.08, 0.0, 0.40, 0.36, 0.50, 0.45}, // softer interior
        {0.0, 0.0, 0.05, 0.14, 0.14, 0.80, 0.05},  // dark channel
    };

    Volume3D v(dims, 0.0);
    for (std::size_t k = 0; k < dims.s; ++k) {
        const double w = unit_coord(k, dims.s);
        for (std::size_t j = 0; j < dims.n; ++j) {
            const double q = unit_coord(j, dims.n);
            for (std::size_t i = 0; i < dims.m; ++i) {
                const double p = unit_coord(i, dims.m);
                double value = 0.0;
                for (const auto& e : bodies) {
                    const double dx = (p - e.cx) / e.ax;
                    const double dy = (q - e.cy) / e.ay;
                    const double dz = (w - e.cz) / e.az;
                    if (dx * dx + dy * dy + dz * dz <= 1.0) value = e.value;
                }
                v.at(i, j, k) = value;
            }
        }
    }
    return v;
}

Volume3D random_smooth(const Dims3& dims, std::uint64_t seed) {
    Volume3D noise = gaussian_noise(dims, seed);
    const std::size_t min_axis = std::min({dims.m, dims.n, dims.s});
    const double sigma = std::max(1.0, static_cast<double>(min_axis) / 16.0);
    std::size_t ksz = static_cast<std::size_t>(std::lround(4.0 * sigma)) | 1;  // odd
    ksz = std::min({ksz, dims.m, dims.n, dims.s});
    if (ksz % 2 == 0) --ksz;
    const Volume3D psf =
        make_gaussian_psf(PsfSpec::gaussian({ksz, ksz, ksz}, {sigma, sigma, sigma}), dims);
    Volume3D smooth = blur_apply(noise, psf_to_spectrum(psf));

    double lo = smooth[0], hi = smooth[0];
    for (std::size_t p = 0; p < smooth.size(); ++p) {
        lo = std::min(lo, smooth[p]);
        hi = std::max(hi, smooth[p]);
    }
    const double range = hi > lo ? hi - lo : 1.0;
    for (std::size_t p = 0; p < smooth.size(); ++p) smooth[p] = (smooth[p] - lo) / range;
    return smooth;
}

}  // namespace

Volume3D make_phantom(const Dims3& dims, PhantomKind kind, std::uint64_t seed,
                      double constant_value) {
    if (dims.count() == 0) throw std::invalid_argument("make_phantom: empty dims");
    switch (kind) {
        case PhantomKind::Constant: return Volume3D(dims, constant_value);
        case PhantomKind::NestedEllipsoids: return nested_ellipsoids(dims);
        case PhantomKind::RandomSmooth: return random_smooth(dims, seed);
    }
    throw std::invalid_argument("make_phantom: unknown kind");
}

Volume3D gaussian_noise(const Dims3& dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        // 53-bit mantissa in (0,1]; never 0 so log() below is safe.
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
    };
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Volume3D out(dims);
    for (std::size_t p = 0; p < out.size(); p += 2) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[p] = r * std::cos(two_pi * u2);
        if (p + 1 < out.size()) out[p + 1] = r * std::sin(two_pi * u2);
    }
    return out;
}

DegradeResult degrade(const Volume3D& x, const DegradationRecipe& recipe) {
    require_same_dims(x.dims(), recipe.spec.hr(), "degrade");
    const Volume3D psf = make_gaussian_psf(recipe.psf, recipe.spec.hr());
    Volume3D y = decimate(blur_apply(x, psf_to_spectrum(psf)), recipe.spec);

    DegradeResult out;
    if (recipe.bsnr_db) {
        double mean = 0.0;
        for (std::size_t g = 0; g < y.size(); ++g) mean += y[g];
        mean /= static_cast<double>(y.size());
        double var = 0.0;
        for (std::size_t g = 0; g < y.size(); ++g) var += (y[g] - mean) * (y[g] - mean);
        var /= static_cast<double>(y.size());
        const double sigma = std::sqrt(var / std::pow(10.0, *recipe.bsnr_db / 10.0));
        const Volume3D n = gaussian_noise(y.dims(), recipe.rng_seed);
        for (std::size_t g = 0; g < y.size(); ++g) y[g] += sigma * n[g];
        out.noise_sigma = sigma;
    }
    require_finite(y, "degrade");
    out.y = std::move(y);
    return out;
}

}  // namespace volsr
