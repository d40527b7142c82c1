#include "volsr/operators.hpp"

#include <cmath>
#include <numbers>

namespace volsr {

DecimationSpec::DecimationSpec(const Dims3& hr_dims, std::array<std::size_t, 3> rates)
    : hr_(hr_dims), rates_(rates) {
    const char* axis_names[3] = {"1 (rows)", "2 (cols)", "3 (slices)"};
    const std::size_t extents[3] = {hr_dims.m, hr_dims.n, hr_dims.s};
    for (int a = 0; a < 3; ++a) {
        if (rates[a] == 0)
            throw shape_error(std::string("DecimationSpec: zero rate on axis ") + axis_names[a]);
        if (extents[a] % rates[a] != 0)
            throw shape_error("DecimationSpec: rate " + std::to_string(rates[a]) +
                              " does not divide axis " + axis_names[a] + " of length " +
                              std::to_string(extents[a]));
    }
    lr_ = {hr_dims.m / rates[0], hr_dims.n / rates[1], hr_dims.s / rates[2]};
}

PsfSpec PsfSpec::gaussian(std::array<std::size_t, 3> size, std::array<double, 3> sigma) {
    PsfSpec s;
    s.size = size;
    s.sigma = sigma;
    return s;
}

PsfSpec PsfSpec::explicit_kernel(std::array<std::size_t, 3> size, std::vector<double> weights) {
    PsfSpec s;
    s.size = size;
    if (weights.size() != size[0] * size[1] * size[2])
        throw std::invalid_argument("PsfSpec: weight count does not match kernel size");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("PsfSpec: weights must be nonnegative");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("PsfSpec: weights must not all be zero");
    for (double& w : weights) w /= sum;
    s.weights = std::move(weights);
    return s;
}

namespace {

std::vector<double> sample_gaussian_1d(std::size_t size, double sigma) {
    const auto half = static_cast<long>(size / 2);
    std::vector<double> w(size);
    for (long t = -half; t <= half; ++t) {
        double v;
        if (sigma <= 0.0)
            v = (t == 0) ? 1.0 : 0.0;  // sigma -> 0 limit: delta
        else
            v = std::exp(-0.5 * (static_cast<double>(t) / sigma) * (static_cast<double>(t) / sigma));
        w[static_cast<std::size_t>(t + half)] = v;
    }
    return w;
}

}  // namespace

Volume3D make_gaussian_psf(const PsfSpec& spec, const Dims3& hr_dims) {
    for (int a = 0; a < 3; ++a) {
        if (spec.size[a] % 2 == 0)
            throw std::invalid_argument("make_gaussian_psf: kernel size must be odd on axis " +
                                        std::to_string(a + 1));
    }
    const std::size_t extents[3] = {hr_dims.m, hr_dims.n, hr_dims.s};
    for (int a = 0; a < 3; ++a)
        if (spec.size[a] > extents[a])
            throw std::invalid_argument("make_gaussian_psf: kernel size " +
                                        std::to_string(spec.size[a]) + " exceeds volume axis " +
                                        std::to_string(a + 1) + " of length " +
                                        std::to_string(extents[a]));

    const std::size_t kr = spec.size[0], kc = spec.size[1], ks = spec.size[2];
    std::vector<double> kernel(kr * kc * ks);
    if (!spec.weights.empty()) {
        kernel = spec.weights;  // already normalized
    } else {
        const auto wr = sample_gaussian_1d(kr, spec.sigma[0]);
        const auto wc = sample_gaussian_1d(kc, spec.sigma[1]);
        const auto ws = sample_gaussian_1d(ks, spec.sigma[2]);
        double sum = 0.0;
        for (std::size_t c = 0; c < ks; ++c)
            for (std::size_t b = 0; b < kc; ++b)
                for (std::size_t a = 0; a < kr; ++a) {
                    const double v = wr[a] * wc[b] * ws[c];
                    kernel[a + kr * b + kr * kc * c] = v;
                    sum += v;
                }
        for (double& v : kernel) v /= sum;
    }

    // Center at (0,0,0) with wrap-around.
    Volume3D psf(hr_dims);
    const long hr2 = static_cast<long>(kr / 2), hc2 = static_cast<long>(kc / 2),
               hs2 = static_cast<long>(ks / 2);
    for (std::size_t c = 0; c < ks; ++c)
        for (std::size_t b = 0; b < kc; ++b)
            for (std::size_t a = 0; a < kr; ++a) {
                const long di = static_cast<long>(a) - hr2;
                const long dj = static_cast<long>(b) - hc2;
                const long dk = static_cast<long>(c) - hs2;
                const std::size_t i =
                    static_cast<std::size_t>((di + static_cast<long>(hr_dims.m)) %
                                             static_cast<long>(hr_dims.m));
                const std::size_t j =
                    static_cast<std::size_t>((dj + static_cast<long>(hr_dims.n)) %
                                             static_cast<long>(hr_dims.n));
                const std::size_t k =
                    static_cast<std::size_t>((dk + static_cast<long>(hr_dims.s)) %
                                             static_cast<long>(hr_dims.s));
                psf.at(i, j, k) += kernel[a + kr * b + kr * kc * c];
            }
    return psf;
}

SpectrumDiag psf_to_spectrum(const Volume3D& psf) {
    return SpectrumDiag{dft3_unnormalized(psf)};
}

Volume3D blur_apply(const Volume3D& x, const SpectrumDiag& lambda, bool conjugate) {
    require_same_dims(x.dims(), lambda.dims(), "blur_apply");
    ComplexVolume3D xh = fft3(x);
    for (std::size_t p = 0; p < xh.size(); ++p)
        xh[p] *= conjugate ? std::conj(lambda.values[p]) : lambda.values[p];
    return ifft3_real(xh);
}

Volume3D decimate(const Volume3D& x, const DecimationSpec& spec) {
    require_same_dims(x.dims(), spec.hr(), "decimate");
    const Dims3& lr = spec.lr();
    Volume3D y(lr);
    for (std::size_t k = 0; k < lr.s; ++k)
        for (std::size_t j = 0; j < lr.n; ++j)
            for (std::size_t i = 0; i < lr.m; ++i)
                y.at(i, j, k) = x.at(i * spec.dr(), j * spec.dc(), k * spec.ds());
    return y;
}

Volume3D decimate_adjoint(const Volume3D& y, const DecimationSpec& spec) {
    require_same_dims(y.dims(), spec.lr(), "decimate_adjoint");
    const Dims3& lr = spec.lr();
    Volume3D x(spec.hr());
    for (std::size_t k = 0; k < lr.s; ++k)
        for (std::size_t j = 0; j < lr.n; ++j)
            for (std::size_t i = 0; i < lr.m; ++i)
                x.at(i * spec.dr(), j * spec.dc(), k * spec.ds()) = y.at(i, j, k);
    return x;
}

Volume3D nn_upsample(const Volume3D& y, const DecimationSpec& spec) {
    require_same_dims(y.dims(), spec.lr(), "nn_upsample");
    const Dims3& hr = spec.hr();
    Volume3D x(hr);
    for (std::size_t k = 0; k < hr.s; ++k)
        for (std::size_t j = 0; j < hr.n; ++j)
            for (std::size_t i = 0; i < hr.m; ++i)
                x.at(i, j, k) = y.at(i / spec.dr(), j / spec.dc(), k / spec.ds());
    return x;
}

Volume3D zero_fill_upsample(const Volume3D& y, const DecimationSpec& spec) {
    Volume3D x = decimate_adjoint(y, spec);
    const double d = static_cast<double>(spec.rate());
    for (std::size_t p = 0; p < x.size(); ++p) x[p] *= d;
    return x;
}

namespace {

// Neighbor strides per axis with periodic wrap.
struct AxisWalk {
    std::size_t len;     // extent along the axis
    std::size_t stride;  // flat stride of one step
};

AxisWalk axis_walk(const Dims3& d, Axis a) {
    switch (a) {
        case Axis::Rows: return {d.m, 1};
        case Axis::Cols: return {d.n, d.m};
        default: return {d.s, d.m * d.n};
    }
}

}  // namespace

Volume3D diff_forward(const Volume3D& x, Axis axis) {
    const Dims3& d = x.dims();
    const AxisWalk w = axis_walk(d, axis);
    Volume3D out(d);
    for (std::size_t k = 0; k < d.s; ++k)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t i = 0; i < d.m; ++i) {
                const std::size_t p = lex_index(i, j, k, d);
                const std::size_t pos[3] = {i, j, k};
                const std::size_t a = static_cast<std::size_t>(axis);
                const std::size_t next =
                    (pos[a] + 1 == w.len) ? p - (w.len - 1) * w.stride : p + w.stride;
                out[p] = x[next] - x[p];
            }
    return out;
}

Volume3D diff_adjoint(const Volume3D& x, Axis axis) {
    const Dims3& d = x.dims();
    const AxisWalk w = axis_walk(d, axis);
    Volume3D out(d);
    for (std::size_t k = 0; k < d.s; ++k)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t i = 0; i < d.m; ++i) {
                const std::size_t p = lex_index(i, j, k, d);
                const std::size_t pos[3] = {i, j, k};
                const std::size_t a = static_cast<std::size_t>(axis);
                const std::size_t prev =
                    (pos[a] == 0) ? p + (w.len - 1) * w.stride : p - w.stride;
                out[p] = x[prev] - x[p];
            }
    return out;
}

DiffSpectra finite_diff_spectra(const Dims3& hr_dims) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    DiffSpectra out{SpectrumDiag{ComplexVolume3D(hr_dims)}, SpectrumDiag{ComplexVolume3D(hr_dims)},
                    SpectrumDiag{ComplexVolume3D(hr_dims)}};
    for (std::size_t k = 0; k < hr_dims.s; ++k)
        for (std::size_t j = 0; j < hr_dims.n; ++j)
            for (std::size_t i = 0; i < hr_dims.m; ++i) {
                const std::size_t p = lex_index(i, j, k, hr_dims);
                auto ev = [two_pi](std::size_t f, std::size_t len) -> std::complex<double> {
                    if (f == 0) return 0.0;  // exact zero at DC
                    const double ang = two_pi * static_cast<double>(f) / static_cast<double>(len);
                    return {std::cos(ang) - 1.0, std::sin(ang)};
                };
                out.rows.values[p] = ev(i, hr_dims.m);
                out.cols.values[p] = ev(j, hr_dims.n);
                out.slices.values[p] = ev(k, hr_dims.s);
            }
    return out;
}

}  // namespace volsr
