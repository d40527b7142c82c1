#include "volsr/selftest.hpp"

#include <cmath>
#include <random>

#include "volsr/dense.hpp"
#include "volsr/solvers.hpp"
#include "volsr/spectral.hpp"

namespace volsr {

namespace {

Volume3D random_volume(const Dims3& dims, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Volume3D v(dims);
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = dist(rng);
    return v;
}

ComplexVolume3D random_spectrum(const Dims3& dims, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexVolume3D v(dims);
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = {dist(rng), dist(rng)};
    return v;
}

Volume3D random_psf(const Dims3& hr, std::size_t ksz, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> w(ksz * ksz * ksz);
    for (auto& v : w) v = dist(rng);
    return make_gaussian_psf(PsfSpec::explicit_kernel({ksz, ksz, ksz}, std::move(w)), hr);
}

double rel_err(const Volume3D& got, const Volume3D& want) {
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < got.size(); ++p) {
        const double d = got[p] - want[p];
        num += d * d;
        den += want[p] * want[p];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
    std::vector<CheckResult> results;
    auto record = [&results](std::string name, double dev, double tol) {
        results.push_back({std::move(name), dev, tol, dev < tol});
    };
    std::mt19937_64 rng(42);

    // Kronecker decomposition of the decimation mask: exhaustive small sweep.
    {
        double worst = 0.0;
        int cases = 0;
        for (std::size_t m : {2, 4, 6})
            for (std::size_t n : {2, 4, 6})
                for (std::size_t s : {2, 4, 6})
                    for (std::size_t dr : {1, 2, 3})
                        for (std::size_t dc : {1, 2, 3})
                            for (std::size_t ds : {1, 2, 3}) {
                                if (m % dr || n % dc || s % ds) continue;
                                const DecimationSpec spec({m, n, s}, {dr, dc, ds});
                                worst = std::max(worst, verify_eq8(spec));
                                ++cases;
                            }
        record("mask_kronecker_decomposition_sweep(" + std::to_string(cases) + " specs)", worst,
               1e-10);
    }

    // Folded spectrum acts like the dense structural-matrix product.
    {
        double worst = 0.0;
        for (auto [dims, rates] : std::vector<std::pair<Dims3, std::array<std::size_t, 3>>>{
                 {{4, 4, 2}, {2, 2, 1}}, {{6, 4, 2}, {3, 2, 2}}, {{4, 2, 4}, {2, 1, 2}}}) {
            const DecimationSpec spec(dims, rates);
            SpectrumDiag lambda{random_spectrum(dims, rng)};
            FoldedSpectrum folded(lambda, spec);
            if (opts.inject_block_swap_fault) folded.swap_blocks_for_fault_injection();

            const ComplexVolume3D vhat = random_spectrum(dims, rng);
            const ComplexVolume3D got = folded.apply(vhat);

            // Dense route: structural fold of the element-wise product.
            ComplexVolume3D prod(dims);
            for (std::size_t p = 0; p < prod.size(); ++p) prod[p] = lambda.values[p] * vhat[p];
            const ComplexVolume3D want = alias_fold(prod, spec);
            double dev = 0.0;
            for (std::size_t g = 0; g < got.size(); ++g)
                dev = std::max(dev, std::abs(got[g] - want[g]));
            worst = std::max(worst, dev);

            // And against the fully dense matrix product on the flattened grid.
            const Eigen::MatrixXcd F = build_dense_dft(dims);
            const Eigen::MatrixXd D = build_dense_decimation(spec);
            const Eigen::MatrixXcd mask = (D.transpose() * D).cast<std::complex<double>>();
            Eigen::VectorXcd lam = to_eigen(lambda.values);
            const Eigen::MatrixXcd middle =
                lam.asDiagonal().toDenseMatrix().adjoint() * F * mask * F.adjoint() *
                lam.asDiagonal().toDenseMatrix();
            // (1/d) * folded^H folded == Lambda^H F mask F^H Lambda
            const std::size_t nh = dims.count();
            Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(nh, nh);
            for (std::size_t col = 0; col < nh; ++col) {
                ComplexVolume3D e(dims);
                e[col] = 1.0;
                const ComplexVolume3D fe = folded.apply(e);
                const ComplexVolume3D back = folded.apply_adjoint(fe);
                for (std::size_t row = 0; row < nh; ++row)
                    gram(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                        back[row] / static_cast<double>(spec.rate());
            }
            worst = std::max(worst, (gram - middle).cwiseAbs().maxCoeff());
        }
        record("folded_spectrum_vs_dense", worst, 1e-10);
    }

    // Adjointness of D, H, and the finite differences.
    {
        const Dims3 dims{6, 4, 4};
        const DecimationSpec spec(dims, {3, 2, 2});
        const Volume3D psf = random_psf(dims, 3, rng);
        const SpectrumDiag lambda = psf_to_spectrum(psf);
        double worst = 0.0;

        const Volume3D x = random_volume(dims, rng);
        const Volume3D ylr = random_volume(spec.lr(), rng);
        const double lhs_d = dot(decimate(x, spec), ylr);
        const double rhs_d = dot(x, decimate_adjoint(ylr, spec));
        worst = std::max(worst, std::abs(lhs_d - rhs_d) / std::max(std::abs(rhs_d), 1e-300));

        const Volume3D yh = random_volume(dims, rng);
        const double lhs_h = dot(blur_apply(x, lambda), yh);
        const double rhs_h = dot(x, blur_apply(yh, lambda, true));
        worst = std::max(worst, std::abs(lhs_h - rhs_h) / std::max(std::abs(rhs_h), 1e-300));

        for (Axis a : {Axis::Rows, Axis::Cols, Axis::Slices}) {
            const double lhs = dot(diff_forward(x, a), yh);
            const double rhs = dot(x, diff_adjoint(yh, a));
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        }
        record("adjoint_inner_products", worst, 1e-10);
    }

    // Blur equals the dense circulant multiply.
    {
        const Dims3 dims{8, 8, 8};
        const Volume3D psf = random_psf(dims, 3, rng);
        const Volume3D x = random_volume(dims, rng);
        const Eigen::MatrixXd H = build_dense_blur(psf);
        const Volume3D want = from_eigen(H * to_eigen(x), dims);
        record("blur_vs_dense_circulant", rel_err(blur_apply(x, psf_to_spectrum(psf)), want),
               1e-10);
    }

    // Closed-form solver equals the dense normal-equations solve.
    {
        double worst = 0.0;
        for (auto [dims, rates] : std::vector<std::pair<Dims3, std::array<std::size_t, 3>>>{
                 {{8, 8, 8}, {2, 2, 2}}, {{6, 4, 2}, {3, 2, 1}}, {{4, 6, 4}, {2, 3, 2}}}) {
            const DecimationSpec spec(dims, rates);
            const Volume3D psf = random_psf(dims, 3, rng);
            TikhonovConfig cfg;
            cfg.lambda = 0.05;
            cfg.xbar = random_volume(dims, rng);
            const Volume3D y = random_volume(spec.lr(), rng);
            const Volume3D fast = tikhonov_fast(y, psf_to_spectrum(psf), spec, cfg);
            const Volume3D dense = dense_tikhonov(y, psf, spec, cfg);
            worst = std::max(worst, rel_err(fast, dense));
        }
        record("tikhonov_fast_vs_dense", worst, 1e-8);
    }

    // TV x-update equals the dense tau-floored solve.
    {
        double worst = 0.0;
        const Dims3 dims{8, 8, 8};
        const DecimationSpec spec(dims, {2, 2, 2});
        const Volume3D psf = random_psf(dims, 3, rng);
        const SpectrumDiag lambda = psf_to_spectrum(psf);
        const FoldedSpectrum folded(lambda, spec);
        const double mu = 0.3, tau = 1e-6;
        const Volume3D gamma = make_gamma(finite_diff_spectra(dims), tau);
        for (int rep = 0; rep < 3; ++rep) {
            const Volume3D y = random_volume(spec.lr(), rng);
            Volume3D theta(dims);
            for (int a = 0; a < 3; ++a) {
                const Volume3D adj = diff_adjoint(random_volume(dims, rng), static_cast<Axis>(a));
                for (std::size_t p = 0; p < theta.size(); ++p) theta[p] += adj[p];
            }
            const Volume3D fast =
                tv_x_update(y, folded, lambda, spec, mu, fft3(theta), gamma);
            const Volume3D dense = dense_tv_x_update(y, psf, spec, mu, theta, tau);
            worst = std::max(worst, rel_err(fast, dense));
        }
        record("tv_x_update_vs_dense", worst, 1e-6);
    }

    return results;
}

}  // namespace volsr
