#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "volsr/dense.hpp"
#include "volsr/metrics.hpp"
#include "volsr/sim.hpp"
#include "volsr/solvers.hpp"

using namespace volsr;
using namespace volsr::test;

namespace {

// Brute-force prox oracle: multilevel 3D grid search for
// argmin_z t*||z|| + 1/2*||z - nu||^2, independent of the closed form.
std::array<double, 3> grid_prox(const std::array<double, 3>& nu, double t) {
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double half = std::max({std::abs(nu[0]), std::abs(nu[1]), std::abs(nu[2]), t, 0.5}) * 1.25;
    std::array<double, 3> best = center;
    double best_val = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 7; ++level) {
        constexpr int K = 10;  // 21 points per axis
        for (int a = -K; a <= K; ++a)
            for (int b = -K; b <= K; ++b)
                for (int c = -K; c <= K; ++c) {
                    const double z0 = center[0] + half * a / K;
                    const double z1 = center[1] + half * b / K;
                    const double z2 = center[2] + half * c / K;
                    const double nz = std::sqrt(z0 * z0 + z1 * z1 + z2 * z2);
                    const double d0 = z0 - nu[0], d1 = z1 - nu[1], d2 = z2 - nu[2];
                    const double val = t * nz + 0.5 * (d0 * d0 + d1 * d1 + d2 * d2);
                    if (val < best_val) {
                        best_val = val;
                        best = {z0, z1, z2};
                    }
                }
        center = best;
        half /= 4.0;
    }
    return best;
}

Volume3D random_theta(const Dims3& dims, std::mt19937_64& rng) {
    Volume3D theta(dims);
    for (int a = 0; a < 3; ++a) {
        const Volume3D adj = diff_adjoint(random_volume(dims, rng), static_cast<Axis>(a));
        for (std::size_t p = 0; p < theta.size(); ++p) theta[p] += adj[p];
    }
    return theta;
}

}  // namespace

TEST_CASE("tikhonov_fast: identity operators reduce to the scalar formula") {
    std::mt19937_64 rng(1);
    const Dims3 d{4, 4, 4};
    const DecimationSpec spec(d, {1, 1, 1});
    SpectrumDiag ones{ComplexVolume3D(d, 1.0)};
    TikhonovConfig cfg;
    cfg.lambda = 0.35;
    cfg.xbar = random_volume(d, rng);
    const Volume3D y = random_volume(d, rng);

    const Volume3D x = tikhonov_fast(y, ones, spec, cfg);
    for (std::size_t p = 0; p < x.size(); ++p)
        CHECK(x[p] == doctest::Approx((y[p] + 2 * 0.35 * cfg.xbar[p]) / (1 + 2 * 0.35))
                          .epsilon(1e-12));
}

TEST_CASE("tikhonov_fast: huge lambda returns the prior") {
    std::mt19937_64 rng(2);
    const Dims3 d{8, 8, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = random_psf(d, 3, rng);
    TikhonovConfig cfg;
    cfg.lambda = 1e6;
    cfg.xbar = random_volume(d, rng);
    const Volume3D y = random_volume(spec.lr(), rng);
    const Volume3D x = tikhonov_fast(y, psf_to_spectrum(psf), spec, cfg);
    CHECK(rel_err(x, cfg.xbar) < 1e-4);
}

TEST_CASE("tikhonov_fast rejects bad lambda") {
    const Dims3 d{4, 4, 4};
    const DecimationSpec spec(d, {1, 1, 1});
    SpectrumDiag ones{ComplexVolume3D(d, 1.0)};
    TikhonovConfig cfg;
    cfg.lambda = 0.0;
    cfg.xbar = Volume3D(d);
    CHECK_THROWS_AS(tikhonov_fast(Volume3D(d), ones, spec, cfg), std::invalid_argument);
}

TEST_CASE("tikhonov_fast matches the dense normal-equations oracle") {
    std::mt19937_64 rng(3);
    for (auto [dims, rates] : std::vector<std::pair<Dims3, std::array<std::size_t, 3>>>{
             {{8, 8, 8}, {2, 2, 2}}, {{6, 4, 4}, {3, 2, 1}}, {{4, 6, 4}, {2, 3, 2}},
             {{8, 4, 4}, {2, 1, 2}}}) {
        const DecimationSpec spec(dims, rates);
        const Volume3D psf = random_psf(dims, 3, rng);
        TikhonovConfig cfg;
        cfg.lambda = 0.02 + 0.2 * std::uniform_real_distribution<double>(0, 1)(rng);
        cfg.xbar = random_volume(dims, rng);
        const Volume3D y = random_volume(spec.lr(), rng);

        const Volume3D fast = tikhonov_fast(y, psf_to_spectrum(psf), spec, cfg);
        const Volume3D dense = dense_tikhonov(y, psf, spec, cfg);
        CAPTURE(to_string(dims));
        CHECK(rel_err(fast, dense) < 1e-8);
    }
}

TEST_CASE("tikhonov_fast satisfies the normal equations at any scale") {
    std::mt19937_64 rng(4);
    const Dims3 d{12, 10, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf =
        make_gaussian_psf(PsfSpec::gaussian({5, 5, 5}, {1.5, 1.2, 1.0}), d);
    const SpectrumDiag lam = psf_to_spectrum(psf);
    TikhonovConfig cfg;
    cfg.lambda = 0.05;
    cfg.xbar = random_volume(d, rng);
    const Volume3D y = random_volume(spec.lr(), rng);
    const Volume3D x = tikhonov_fast(y, lam, spec, cfg);

    // residual of (H^H D_mask H + 2l) x - (H^H D^H y + 2l xbar) via operators
    const Volume3D hx = blur_apply(x, lam);
    const Volume3D masked = decimate_adjoint(decimate(hx, spec), spec);
    const Volume3D lhs_blur = blur_apply(masked, lam, true);
    const Volume3D rhs_blur = blur_apply(decimate_adjoint(y, spec), lam, true);
    double res = 0.0, rhs_norm = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double lhs = lhs_blur[p] + 2 * cfg.lambda * x[p];
        const double rhs = rhs_blur[p] + 2 * cfg.lambda * cfg.xbar[p];
        res += (lhs - rhs) * (lhs - rhs);
        rhs_norm += rhs * rhs;
    }
    CHECK(std::sqrt(res / rhs_norm) < 1e-8);
}

TEST_CASE("tikhonov solve costs exactly one forward and one inverse FFT") {
    std::mt19937_64 rng(5);
    const Dims3 d{8, 8, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = random_psf(d, 3, rng);
    TikhonovConfig cfg;
    cfg.lambda = 0.1;
    cfg.xbar = random_volume(d, rng);
    const TikhonovOperator op(psf_to_spectrum(psf), spec, cfg);
    const Volume3D y = random_volume(spec.lr(), rng);

    reset_fft_counters();
    (void)op.solve(y);
    const FftCounters counters = fft_counters();
    CHECK(counters.forward == 1);
    CHECK(counters.inverse == 1);
}

TEST_CASE("dense_tikhonov: identity case and residual check") {
    std::mt19937_64 rng(6);
    const Dims3 d{4, 4, 2};
    SUBCASE("identity operators") {
        const DecimationSpec spec(d, {1, 1, 1});
        const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({1, 1, 1}, {0, 0, 0}), d);
        TikhonovConfig cfg;
        cfg.lambda = 0.4;
        cfg.xbar = random_volume(d, rng);
        const Volume3D y = random_volume(d, rng);
        const Volume3D x = dense_tikhonov(y, psf, spec, cfg);
        for (std::size_t p = 0; p < x.size(); ++p)
            CHECK(x[p] == doctest::Approx((y[p] + 0.8 * cfg.xbar[p]) / 1.8).epsilon(1e-10));
    }
    SUBCASE("solution residual") {
        const Dims3 d3{4, 4, 4};
        const DecimationSpec spec(d3, {2, 2, 1});
        const Volume3D psf = random_psf(d3, 3, rng);
        TikhonovConfig cfg;
        cfg.lambda = 0.07;
        cfg.xbar = random_volume(d3, rng);
        const Volume3D y = random_volume(spec.lr(), rng);
        const Volume3D x = dense_tikhonov(y, psf, spec, cfg);

        const Eigen::MatrixXd H = build_dense_blur(psf);
        const Eigen::MatrixXd D = build_dense_decimation(spec);
        const Eigen::MatrixXd DH = D * H;
        const Eigen::MatrixXd A = DH.transpose() * DH +
                                  2 * cfg.lambda * Eigen::MatrixXd::Identity(64, 64);
        const Eigen::VectorXd rhs =
            DH.transpose() * to_eigen(y) + 2 * cfg.lambda * to_eigen(cfg.xbar);
        CHECK((A * to_eigen(x) - rhs).norm() / rhs.norm() < 1e-10);
    }
}

TEST_CASE("admm_l2l2 stays at the exact fixed point") {
    std::mt19937_64 rng(7);
    const Dims3 d{8, 8, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = random_psf(d, 3, rng);
    const SpectrumDiag lam = psf_to_spectrum(psf);
    TikhonovConfig cfg;
    cfg.lambda = 0.05;
    cfg.xbar = random_volume(d, rng);
    const Volume3D y = random_volume(spec.lr(), rng);

    const Volume3D xstar = tikhonov_fast(y, lam, spec, cfg);
    AdmmL2Options opts;
    opts.mu = 0.3;
    opts.rel_tol = 0.0;  // run exactly one iteration
    AdmmL2State state;
    state.x = xstar;
    state.v = blur_apply(xstar, lam);
    // stationary dual: D^H (D H x* - y) / mu
    Volume3D r = decimate(state.v, spec);
    for (std::size_t g = 0; g < r.size(); ++g) r[g] -= y[g];
    state.dual = decimate_adjoint(r, spec);
    for (std::size_t p = 0; p < state.dual.size(); ++p) state.dual[p] /= opts.mu;
    opts.warm_start = state;

    auto [x1, report] = admm_l2l2(y, lam, spec, cfg, 1, opts);
    CHECK(report.iterations == 1);
    CHECK(rel_err(x1, xstar) < 1e-10);
}

TEST_CASE("admm_l2l2 converges to the closed-form minimizer") {
    std::mt19937_64 rng(8);
    const Dims3 d{16, 16, 16};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({5, 5, 5}, {1.5, 1.5, 1.5}), d);
    const SpectrumDiag lam = psf_to_spectrum(psf);

    const Volume3D truth = make_phantom(d, PhantomKind::NestedEllipsoids);
    DegradationRecipe recipe{PsfSpec::gaussian({5, 5, 5}, {1.5, 1.5, 1.5}), spec, 30.0, 17};
    const Volume3D y = degrade(truth, recipe).y;

    TikhonovConfig cfg;
    cfg.lambda = 0.01;
    cfg.xbar = zero_fill_upsample(y, spec);

    const Volume3D fast = tikhonov_fast(y, lam, spec, cfg);
    auto [iter, report] = admm_l2l2(y, lam, spec, cfg, 4000, {.mu = 0.1, .rel_tol = 1e-11});
    CHECK(report.iterations < 4000);  // actually converged

    const double gap = std::abs(psnr(truth, fast) - psnr(truth, iter));
    CHECK(gap < 0.01);

    // objective certificate: the iterate's objective must match the exact
    // minimizer's to high relative accuracy
    auto objective = [&](const Volume3D& x) {
        const Volume3D z = decimate(blur_apply(x, lam), spec);
        double fit = 0.0;
        for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);
        double reg = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
            reg += (x[p] - cfg.xbar[p]) * (x[p] - cfg.xbar[p]);
        return 0.5 * fit + cfg.lambda * reg;
    };
    CHECK(report.objective.back() ==
          doctest::Approx(objective(fast)).epsilon(1e-8));
}

TEST_CASE("tv_shrink closed-form checks") {
    const Dims3 d{1, 1, 1};
    auto one = [&](double v) { return Volume3D(d, v); };

    SUBCASE("(3,0,0) with threshold 1 -> (2,0,0)") {
        const auto out = tv_shrink(one(3.0), one(0.0), one(0.0), 1.0);
        CHECK(out[0][0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(out[1][0] == 0.0);
        CHECK(out[2][0] == 0.0);
    }
    SUBCASE("below-threshold magnitude collapses to zero") {
        const auto out = tv_shrink(one(0.3), one(0.2), one(0.1), 1.0);
        CHECK(out[0][0] == 0.0);
        CHECK(out[1][0] == 0.0);
        CHECK(out[2][0] == 0.0);
    }
    SUBCASE("zero vector maps to zero even at zero threshold") {
        const auto out = tv_shrink(one(0.0), one(0.0), one(0.0), 0.0);
        CHECK(out[0][0] == 0.0);
    }
    SUBCASE("negative threshold rejected") {
        CHECK_THROWS_AS(tv_shrink(one(1.0), one(0.0), one(0.0), -0.5), std::invalid_argument);
    }
}

TEST_CASE("tv_shrink agrees with the grid-search prox oracle") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::uniform_real_distribution<double> tdist(0.0, 1.5);
    const Dims3 d{1, 1, 1};
    for (int rep = 0; rep < 25; ++rep) {
        const std::array<double, 3> nu{dist(rng), dist(rng), dist(rng)};
        const double t = tdist(rng);
        const auto want = grid_prox(nu, t);
        const auto out = tv_shrink(Volume3D(d, nu[0]), Volume3D(d, nu[1]), Volume3D(d, nu[2]), t);
        CHECK(std::abs(out[0][0] - want[0]) < 1e-3);
        CHECK(std::abs(out[1][0] - want[1]) < 1e-3);
        CHECK(std::abs(out[2][0] - want[2]) < 1e-3);
    }
}

TEST_CASE("tv_shrink is nonexpansive") {
    std::mt19937_64 rng(10);
    const Dims3 d{6, 6, 6};
    const double t = 0.4;
    const Volume3D a1 = random_volume(d, rng), a2 = random_volume(d, rng),
                   a3 = random_volume(d, rng);
    const Volume3D b1 = random_volume(d, rng), b2 = random_volume(d, rng),
                   b3 = random_volume(d, rng);
    const auto sa = tv_shrink(a1, a2, a3, t);
    const auto sb = tv_shrink(b1, b2, b3, t);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < a1.size(); ++p) {
        num += (sa[0][p] - sb[0][p]) * (sa[0][p] - sb[0][p]) +
               (sa[1][p] - sb[1][p]) * (sa[1][p] - sb[1][p]) +
               (sa[2][p] - sb[2][p]) * (sa[2][p] - sb[2][p]);
        den += (a1[p] - b1[p]) * (a1[p] - b1[p]) + (a2[p] - b2[p]) * (a2[p] - b2[p]) +
               (a3[p] - b3[p]) * (a3[p] - b3[p]);
    }
    CHECK(num <= den * (1 + 1e-12));
}

TEST_CASE("tv_x_update: zero data and prior give zero") {
    const Dims3 d{8, 8, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({3, 3, 3}, {1, 1, 1}), d);
    const SpectrumDiag lam = psf_to_spectrum(psf);
    const FoldedSpectrum folded(lam, spec);
    const Volume3D gamma = make_gamma(finite_diff_spectra(d), 1e-8);
    const Volume3D x = tv_x_update(Volume3D(spec.lr()), folded, lam, spec, 0.5,
                                   ComplexVolume3D(d), gamma);
    CHECK(norm2(x) < 1e-12);
}

TEST_CASE("tv_x_update matches the dense tau-floored solve") {
    std::mt19937_64 rng(11);
    SUBCASE("8^3 at rate 2") {
        const Dims3 d{8, 8, 8};
        const DecimationSpec spec(d, {2, 2, 2});
        const Volume3D psf = random_psf(d, 3, rng);
        const SpectrumDiag lam = psf_to_spectrum(psf);
        const FoldedSpectrum folded(lam, spec);
        const double mu = 0.7, tau = 1e-6;
        const Volume3D gamma = make_gamma(finite_diff_spectra(d), tau);
        for (int rep = 0; rep < 3; ++rep) {
            const Volume3D y = random_volume(spec.lr(), rng);
            const Volume3D theta = random_theta(d, rng);
            const Volume3D fast = tv_x_update(y, folded, lam, spec, mu, fft3(theta), gamma);
            const Volume3D dense = dense_tv_x_update(y, psf, spec, mu, theta, tau);
            CHECK(rel_err(fast, dense) < 1e-8);
        }
    }
    SUBCASE("identity operators, mu=1, tau=1e-8") {
        const Dims3 d{6, 4, 4};
        const DecimationSpec spec(d, {1, 1, 1});
        const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({1, 1, 1}, {0, 0, 0}), d);
        const SpectrumDiag lam = psf_to_spectrum(psf);
        const FoldedSpectrum folded(lam, spec);
        const double mu = 1.0, tau = 1e-8;
        const Volume3D gamma = make_gamma(finite_diff_spectra(d), tau);
        const Volume3D y = random_volume(spec.lr(), rng);
        const Volume3D theta = random_theta(d, rng);
        const Volume3D fast = tv_x_update(y, folded, lam, spec, mu, fft3(theta), gamma);
        const Volume3D dense = dense_tv_x_update(y, psf, spec, mu, theta, tau);
        CHECK(rel_err(fast, dense) < 1e-6);
    }
}

TEST_CASE("unfloored difference gram is rejected as DC-singular") {
    const Dims3 d{4, 4, 4};
    CHECK_THROWS_WITH_AS(make_gamma(finite_diff_spectra(d), 0.0),
                         doctest::Contains("zero frequency"), numeric_error);

    // A gamma with a nonpositive entry is rejected by the x-update too.
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({3, 3, 3}, {1, 1, 1}), d);
    const SpectrumDiag lam = psf_to_spectrum(psf);
    const FoldedSpectrum folded(lam, spec);
    Volume3D gamma = make_gamma(finite_diff_spectra(d), 1e-8);
    gamma[0] = 0.0;
    CHECK_THROWS_AS(tv_x_update(Volume3D(spec.lr()), folded, lam, spec, 1.0,
                                ComplexVolume3D(d), gamma),
                    numeric_error);
}

TEST_CASE("admm_tv solves the near-identity problem") {
    std::mt19937_64 rng(12);
    const Dims3 d{12, 12, 12};
    const DecimationSpec spec(d, {1, 1, 1});
    const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({1, 1, 1}, {0, 0, 0}), d);
    const Volume3D y = random_volume(d, rng, 0.0, 1.0);

    TvAdmmConfig cfg;
    cfg.lambda = 1e-6;
    cfg.mu = 0.1;
    cfg.max_iters = 60;
    cfg.rel_tol = 1e-9;
    auto [x, report] = admm_tv(y, psf, spec, cfg);
    CHECK(rel_err(x, y) < 1e-3);
    CHECK(report.objective.back() <= report.initial_objective);
}

TEST_CASE("admm_tv improves over upsampling baselines on a degraded phantom") {
    const Dims3 d{64, 64, 64};
    const DecimationSpec spec(d, {2, 2, 2});
    const PsfSpec psf_spec = PsfSpec::gaussian({9, 9, 9}, {3, 3, 3});
    const Volume3D truth = make_phantom(d, PhantomKind::NestedEllipsoids);
    const Volume3D y = degrade(truth, DegradationRecipe{psf_spec, spec, 30.0, 4}).y;

    const Volume3D psf = make_gaussian_psf(psf_spec, d);
    TvAdmmConfig cfg;  // defaults: lambda 0.06, mu 0.1, 30 iterations
    auto [x, report] = admm_tv(y, psf, spec, cfg);

    const double peak = 1.0;
    const double psnr_tv = psnr(truth, x, peak);
    const double psnr_zf = psnr(truth, zero_fill_upsample(y, spec), peak);
    const double psnr_nn = psnr(truth, nn_upsample(y, spec), peak);
    INFO("psnr tv=", psnr_tv, " zf=", psnr_zf, " nn=", psnr_nn);
    CHECK(psnr_tv > psnr_zf);
    CHECK(psnr_tv > psnr_nn);

    CHECK(report.primal_residual.back() < report.primal_residual.front());
    CHECK(report.objective.back() <= report.initial_objective);
}

TEST_CASE("admm_tv honors init choices and validates config") {
    const Dims3 d{8, 8, 8};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = make_gaussian_psf(PsfSpec::gaussian({3, 3, 3}, {1, 1, 1}), d);
    const Volume3D y = Volume3D(spec.lr(), 0.5);

    TvAdmmConfig cfg;
    cfg.max_iters = 2;
    cfg.init = TvAdmmConfig::Init::UpsampledObservation;
    CHECK_NOTHROW(admm_tv(y, psf, spec, cfg));

    cfg.init = TvAdmmConfig::Init::Provided;
    cfg.init_volume = Volume3D(d, 0.25);
    CHECK_NOTHROW(admm_tv(y, psf, spec, cfg));
    cfg.init_volume = Volume3D(Dims3{4, 4, 4});
    CHECK_THROWS_AS(admm_tv(y, psf, spec, cfg), shape_error);

    cfg.init = TvAdmmConfig::Init::Zero;
    cfg.lambda = -1.0;
    CHECK_THROWS_AS(admm_tv(y, psf, spec, cfg), std::invalid_argument);
    cfg.lambda = 0.06;
    cfg.mu = 0.0;
    CHECK_THROWS_AS(admm_tv(y, psf, spec, cfg), std::invalid_argument);
    cfg.mu = 0.1;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(admm_tv(y, psf, spec, cfg), std::invalid_argument);
}

TEST_CASE("objective_tv examples") {
    std::mt19937_64 rng(13);
    const Dims3 d{6, 4, 4};
    const DecimationSpec spec(d, {2, 2, 2});
    const Volume3D psf = random_psf(d, 3, rng);
    const SpectrumDiag lam = psf_to_spectrum(psf);

    SUBCASE("constant x with consistent y gives zero") {
        const Volume3D x(d, 0.8);
        const Volume3D y = decimate(blur_apply(x, lam), spec);
        CHECK(objective_tv(x, y, lam, spec, 0.25) < 1e-20);
    }

    SUBCASE("zero weight leaves pure data fidelity") {
        const Volume3D x = random_volume(d, rng);
        const Volume3D y = random_volume(spec.lr(), rng);
        const Volume3D z = decimate(blur_apply(x, lam), spec);
        double fit = 0.0;
        for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);
        CHECK(objective_tv(x, y, lam, spec, 0.0) == doctest::Approx(0.5 * fit).epsilon(1e-12));
    }

    SUBCASE("matches a dense recomputation") {
        const Volume3D x = random_volume(d, rng);
        const Volume3D y = random_volume(spec.lr(), rng);
        const double got = objective_tv(x, y, lam, spec, 0.3);

        const Eigen::MatrixXd H = build_dense_blur(psf);
        const Eigen::MatrixXd D = build_dense_decimation(spec);
        const Eigen::VectorXd z = D * H * to_eigen(x);
        double want = 0.5 * (to_eigen(y) - z).squaredNorm();
        const Eigen::VectorXd g1 = build_dense_diff(d, Axis::Rows) * to_eigen(x);
        const Eigen::VectorXd g2 = build_dense_diff(d, Axis::Cols) * to_eigen(x);
        const Eigen::VectorXd g3 = build_dense_diff(d, Axis::Slices) * to_eigen(x);
        for (Eigen::Index p = 0; p < g1.size(); ++p)
            want += 0.3 * std::sqrt(g1[p] * g1[p] + g2[p] * g2[p] + g3[p] * g3[p]);
        CHECK(std::abs(got - want) / want < 1e-10);
    }
}
