#include "volsr/solvers.hpp"

#include <chrono>
#include <cmath>

#include "volsr/dense.hpp"

namespace volsr {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string(name) + " must be positive, got " +
                                    std::to_string(v));
}

double rel_change(const Volume3D& next, const Volume3D& prev) {
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < next.size(); ++p) {
        const double d = next[p] - prev[p];
        num += d * d;
        den += prev[p] * prev[p];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

TikhonovOperator::TikhonovOperator(const SpectrumDiag& lambda, const DecimationSpec& spec,
                                   const TikhonovConfig& cfg)
    : spec_(spec), lambda_(lambda), folded_(lambda, spec), reg_(cfg.lambda) {
    require_positive(cfg.lambda, "lambda");
    require_same_dims(lambda.dims(), spec.hr(), "TikhonovOperator");
    require_same_dims(cfg.xbar.dims(), spec.hr(), "TikhonovOperator: xbar");
    denom_ = gram_diag(folded_);
    const double shift = 2.0 * reg_ * static_cast<double>(spec.rate());
    for (std::size_t g = 0; g < denom_.size(); ++g) denom_[g] += shift;
    xbar_hat_ = fft3(cfg.xbar);
}

Volume3D TikhonovOperator::solve(const Volume3D& y) const {
    require_same_dims(y.dims(), spec_.lr(), "TikhonovOperator::solve");

    // k_hat = Lambda^H F D^H y + 2*lambda*F xbar
    ComplexVolume3D k_hat = fft3(decimate_adjoint(y, spec_));
    for (std::size_t p = 0; p < k_hat.size(); ++p)
        k_hat[p] = std::conj(lambda_.values[p]) * k_hat[p] + 2.0 * reg_ * xbar_hat_[p];

    ComplexVolume3D w = folded_.apply(k_hat);
    for (std::size_t g = 0; g < w.size(); ++g) w[g] /= denom_[g];
    const ComplexVolume3D corr = folded_.apply_adjoint(w);

    ComplexVolume3D x_hat(spec_.hr());
    const double inv2l = 1.0 / (2.0 * reg_);
    for (std::size_t p = 0; p < x_hat.size(); ++p) x_hat[p] = (k_hat[p] - corr[p]) * inv2l;

    Volume3D x = ifft3_real(x_hat);
    require_finite(x, "tikhonov_fast");
    return x;
}

Volume3D tikhonov_fast(const Volume3D& y, const SpectrumDiag& lambda, const DecimationSpec& spec,
                       const TikhonovConfig& cfg) {
    return TikhonovOperator(lambda, spec, cfg).solve(y);
}

Volume3D dense_tikhonov(const Volume3D& y, const Volume3D& psf, const DecimationSpec& spec,
                        const TikhonovConfig& cfg) {
    require_positive(cfg.lambda, "lambda");
    require_dense_size(spec.hr().count(), "dense_tikhonov");
    require_same_dims(y.dims(), spec.lr(), "dense_tikhonov");
    require_same_dims(cfg.xbar.dims(), spec.hr(), "dense_tikhonov: xbar");

    const Eigen::MatrixXd H = build_dense_blur(psf);
    const Eigen::MatrixXd D = build_dense_decimation(spec);
    const Eigen::MatrixXd DH = D * H;
    const auto N = static_cast<Eigen::Index>(spec.hr().count());
    const Eigen::MatrixXd A =
        DH.transpose() * DH + 2.0 * cfg.lambda * Eigen::MatrixXd::Identity(N, N);
    const Eigen::VectorXd rhs = DH.transpose() * to_eigen(y) + 2.0 * cfg.lambda * to_eigen(cfg.xbar);

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw numeric_error("dense_tikhonov: system matrix not positive definite");
    return from_eigen(llt.solve(rhs), spec.hr());
}

std::pair<Volume3D, SolveReport> admm_l2l2(const Volume3D& y, const SpectrumDiag& lambda,
                                           const DecimationSpec& spec, const TikhonovConfig& cfg,
                                           std::size_t max_iters, const AdmmL2Options& opts) {
    require_positive(cfg.lambda, "lambda");
    require_positive(opts.mu, "mu");
    require_same_dims(y.dims(), spec.lr(), "admm_l2l2");
    require_same_dims(cfg.xbar.dims(), spec.hr(), "admm_l2l2: xbar");
    if (max_iters < 1) throw std::invalid_argument("admm_l2l2: max_iters must be >= 1");

    const auto t0 = clock_type::now();
    const Dims3& hr = spec.hr();
    const double mu = opts.mu, lam = cfg.lambda;

    const ComplexVolume3D xbar_hat = fft3(cfg.xbar);
    Volume3D denom(hr);
    for (std::size_t p = 0; p < denom.size(); ++p)
        denom[p] = mu * std::norm(lambda.values[p]) + 2.0 * lam;

    Volume3D x(hr), v(hr), dual(hr);
    if (opts.warm_start) {
        x = opts.warm_start->x;
        v = opts.warm_start->v;
        dual = opts.warm_start->dual;
        require_same_dims(x.dims(), hr, "admm_l2l2: warm start");
        require_same_dims(v.dims(), hr, "admm_l2l2: warm start");
        require_same_dims(dual.dims(), hr, "admm_l2l2: warm start");
    }

    SolveReport report;
    report.initial_objective = [&] {
        ComplexVolume3D xh = fft3(x);
        for (std::size_t p = 0; p < xh.size(); ++p) xh[p] *= lambda.values[p];
        const Volume3D hx = ifft3_real(xh);
        const Volume3D z = decimate(hx, spec);
        double fit = 0.0;
        for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);
        double reg = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
            reg += (x[p] - cfg.xbar[p]) * (x[p] - cfg.xbar[p]);
        return 0.5 * fit + lam * reg;
    }();

    Volume3D work(hr);
    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        const Volume3D x_prev = x;

        // x-update: (mu H^H H + 2 lambda I) x = mu H^H (v - dual) + 2 lambda xbar
        for (std::size_t p = 0; p < work.size(); ++p) work[p] = v[p] - dual[p];
        ComplexVolume3D t_hat = fft3(work);
        ComplexVolume3D x_hat(hr);
        for (std::size_t p = 0; p < x_hat.size(); ++p)
            x_hat[p] = (mu * std::conj(lambda.values[p]) * t_hat[p] + 2.0 * lam * xbar_hat[p]) /
                       denom[p];
        x = ifft3_real(x_hat);

        ComplexVolume3D hx_hat(hr);
        for (std::size_t p = 0; p < hx_hat.size(); ++p) hx_hat[p] = lambda.values[p] * x_hat[p];
        const Volume3D hx = ifft3_real(hx_hat);

        // v-update: (D_mask + mu I) v = D^H y + mu (Hx + dual), diagonal exact
        for (std::size_t p = 0; p < work.size(); ++p) work[p] = hx[p] + dual[p];
        v = work;
        const Dims3& lr = spec.lr();
        for (std::size_t k = 0; k < lr.s; ++k)
            for (std::size_t j = 0; j < lr.n; ++j)
                for (std::size_t i = 0; i < lr.m; ++i) {
                    const std::size_t p =
                        lex_index(i * spec.dr(), j * spec.dc(), k * spec.ds(), hr);
                    v[p] = (y.at(i, j, k) + mu * work[p]) / (1.0 + mu);
                }

        double residual = 0.0;
        for (std::size_t p = 0; p < dual.size(); ++p) {
            const double r = hx[p] - v[p];
            dual[p] += r;
            residual += r * r;
        }

        const Volume3D z = decimate(hx, spec);
        double fit = 0.0;
        for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);
        double reg = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
            reg += (x[p] - cfg.xbar[p]) * (x[p] - cfg.xbar[p]);
        report.objective.push_back(0.5 * fit + lam * reg);
        report.primal_residual.push_back(std::sqrt(residual));
        report.iterations = iter;

        if (opts.rel_tol > 0.0 && rel_change(x, x_prev) < opts.rel_tol) break;
    }

    require_finite(x, "admm_l2l2");
    report.seconds = seconds_since(t0);
    return {std::move(x), std::move(report)};
}

Volume3D make_gamma(const DiffSpectra& diffs, double tau) {
    if (tau < 0.0) throw std::invalid_argument("make_gamma: tau must be nonnegative");
    const Dims3& hr = diffs.rows.dims();
    Volume3D gamma(hr);
    for (std::size_t p = 0; p < gamma.size(); ++p) {
        const double g = std::norm(diffs.rows.values[p]) + std::norm(diffs.cols.values[p]) +
                         std::norm(diffs.slices.values[p]) + tau;
        if (!(g > 0.0))
            throw numeric_error(
                "make_gamma: difference-operator gram is singular at the zero frequency (DC); "
                "a positive tau floor is required");
        gamma[p] = 1.0 / g;
    }
    return gamma;
}

namespace {

void require_gamma_valid(const Volume3D& gamma) {
    for (std::size_t p = 0; p < gamma.size(); ++p)
        if (!(gamma[p] > 0.0) || !std::isfinite(gamma[p]))
            throw numeric_error(
                "tv_x_update: gamma must be strictly positive and finite everywhere; entry " +
                std::to_string(p) +
                " is not (unfloored DC singularity of the difference gram?)");
}

// Shared core: solves the x-subproblem given k_hat already assembled.
Volume3D tv_x_core(const ComplexVolume3D& k_hat, const FoldedSpectrum& folded,
                   const DecimationSpec& spec, double mu, const Volume3D& gamma,
                   const Volume3D& denom) {
    ComplexVolume3D g_hat(spec.hr());
    for (std::size_t p = 0; p < g_hat.size(); ++p) g_hat[p] = gamma[p] * k_hat[p];

    ComplexVolume3D w = folded.apply(g_hat);
    for (std::size_t g = 0; g < w.size(); ++g) w[g] /= denom[g];
    const ComplexVolume3D corr = folded.apply_adjoint_weighted(w, gamma);

    ComplexVolume3D x_hat(spec.hr());
    const double inv_mu = 1.0 / mu;
    for (std::size_t p = 0; p < x_hat.size(); ++p) x_hat[p] = (g_hat[p] - corr[p]) * inv_mu;
    return ifft3_real(x_hat);
}

Volume3D tv_denominator(const FoldedSpectrum& folded, const DecimationSpec& spec, double mu,
                        const Volume3D& gamma) {
    Volume3D denom = gram_diag_weighted(folded, gamma);
    const double shift = mu * static_cast<double>(spec.rate());
    for (std::size_t g = 0; g < denom.size(); ++g) denom[g] += shift;
    return denom;
}

}  // namespace

Volume3D tv_x_update(const Volume3D& y, const FoldedSpectrum& folded, const SpectrumDiag& lambda,
                     const DecimationSpec& spec, double mu, const ComplexVolume3D& theta_hat,
                     const Volume3D& gamma) {
    require_positive(mu, "mu");
    require_same_dims(y.dims(), spec.lr(), "tv_x_update");
    require_same_dims(theta_hat.dims(), spec.hr(), "tv_x_update: theta_hat");
    require_same_dims(gamma.dims(), spec.hr(), "tv_x_update: gamma");
    require_gamma_valid(gamma);

    ComplexVolume3D k_hat = fft3(decimate_adjoint(y, spec));
    for (std::size_t p = 0; p < k_hat.size(); ++p)
        k_hat[p] = std::conj(lambda.values[p]) * k_hat[p] + mu * theta_hat[p];

    return tv_x_core(k_hat, folded, spec, mu, gamma, tv_denominator(folded, spec, mu, gamma));
}

Volume3D dense_tv_x_update(const Volume3D& y, const Volume3D& psf, const DecimationSpec& spec,
                           double mu, const Volume3D& theta, double tau) {
    require_positive(mu, "mu");
    require_dense_size(spec.hr().count(), "dense_tv_x_update");
    const Eigen::MatrixXd H = build_dense_blur(psf);
    const Eigen::MatrixXd D = build_dense_decimation(spec);
    const Eigen::MatrixXd DH = D * H;
    const auto N = static_cast<Eigen::Index>(spec.hr().count());

    Eigen::MatrixXd LtL = Eigen::MatrixXd::Zero(N, N);
    for (Axis a : {Axis::Rows, Axis::Cols, Axis::Slices}) {
        const Eigen::MatrixXd L = build_dense_diff(spec.hr(), a);
        LtL += L.transpose() * L;
    }

    const Eigen::MatrixXd A =
        DH.transpose() * DH + mu * LtL + mu * tau * Eigen::MatrixXd::Identity(N, N);
    const Eigen::VectorXd rhs = DH.transpose() * to_eigen(y) + mu * to_eigen(theta);

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw numeric_error("dense_tv_x_update: system matrix not positive definite");
    return from_eigen(llt.solve(rhs), spec.hr());
}

std::array<Volume3D, 3> tv_shrink(const Volume3D& nu1, const Volume3D& nu2, const Volume3D& nu3,
                                  double threshold) {
    require_same_dims(nu1.dims(), nu2.dims(), "tv_shrink");
    require_same_dims(nu1.dims(), nu3.dims(), "tv_shrink");
    if (threshold < 0.0) throw std::invalid_argument("tv_shrink: threshold must be >= 0");

    std::array<Volume3D, 3> out{Volume3D(nu1.dims()), Volume3D(nu1.dims()), Volume3D(nu1.dims())};
    for (std::size_t p = 0; p < nu1.size(); ++p) {
        const double mag = std::sqrt(nu1[p] * nu1[p] + nu2[p] * nu2[p] + nu3[p] * nu3[p]);
        const double factor = mag > threshold ? 1.0 - threshold / mag : 0.0;
        out[0][p] = factor * nu1[p];
        out[1][p] = factor * nu2[p];
        out[2][p] = factor * nu3[p];
    }
    return out;
}

double objective_tv(const Volume3D& x, const Volume3D& y, const SpectrumDiag& lambda,
                    const DecimationSpec& spec, double tv_weight) {
    require_same_dims(x.dims(), spec.hr(), "objective_tv");
    require_same_dims(y.dims(), spec.lr(), "objective_tv");
    const Volume3D z = decimate(blur_apply(x, lambda), spec);
    double fit = 0.0;
    for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);

    const Volume3D g1 = diff_forward(x, Axis::Rows);
    const Volume3D g2 = diff_forward(x, Axis::Cols);
    const Volume3D g3 = diff_forward(x, Axis::Slices);
    double tv = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p)
        tv += std::sqrt(g1[p] * g1[p] + g2[p] * g2[p] + g3[p] * g3[p]);

    return 0.5 * fit + tv_weight * tv;
}

std::pair<Volume3D, SolveReport> admm_tv(const Volume3D& y, const Volume3D& psf,
                                         const DecimationSpec& spec, const TvAdmmConfig& cfg) {
    require_positive(cfg.lambda, "lambda");
    require_positive(cfg.mu, "mu");
    if (cfg.max_iters < 1) throw std::invalid_argument("admm_tv: max_iters must be >= 1");
    require_same_dims(y.dims(), spec.lr(), "admm_tv");
    require_same_dims(psf.dims(), spec.hr(), "admm_tv: psf");

    const auto t0 = clock_type::now();
    const Dims3& hr = spec.hr();
    const double mu = cfg.mu;
    const double tau = cfg.tau ? *cfg.tau : 1e-8 * mu;

    // Precompute: factorize H, fold Lambda, factorize the difference
    // operators, invert their gram with the tau floor.
    const SpectrumDiag lambda = psf_to_spectrum(psf);
    const FoldedSpectrum folded(lambda, spec);
    const DiffSpectra diffs = finite_diff_spectra(hr);
    const Volume3D gamma = make_gamma(diffs, tau);
    const Volume3D denom = tv_denominator(folded, spec, mu, gamma);

    ComplexVolume3D data_hat = fft3(decimate_adjoint(y, spec));
    for (std::size_t p = 0; p < data_hat.size(); ++p)
        data_hat[p] *= std::conj(lambda.values[p]);

    Volume3D x(hr);
    switch (cfg.init) {
        case TvAdmmConfig::Init::Zero: break;
        case TvAdmmConfig::Init::UpsampledObservation: x = nn_upsample(y, spec); break;
        case TvAdmmConfig::Init::Provided:
            require_same_dims(cfg.init_volume.dims(), hr, "admm_tv: init volume");
            x = cfg.init_volume;
            break;
    }

    std::array<Volume3D, 3> u{diff_forward(x, Axis::Rows), diff_forward(x, Axis::Cols),
                              diff_forward(x, Axis::Slices)};
    std::array<Volume3D, 3> dual{Volume3D(hr), Volume3D(hr), Volume3D(hr)};

    SolveReport report;
    report.initial_objective = objective_tv(x, y, lambda, spec, cfg.lambda);

    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        const Volume3D x_prev = x;

        // x-update via the folded-spectrum inversion
        Volume3D theta(hr);
        for (int a = 0; a < 3; ++a) {
            Volume3D rho(hr);
            for (std::size_t p = 0; p < rho.size(); ++p) rho[p] = u[a][p] - dual[a][p];
            const Volume3D adj = diff_adjoint(rho, static_cast<Axis>(a));
            for (std::size_t p = 0; p < theta.size(); ++p) theta[p] += adj[p];
        }
        ComplexVolume3D k_hat = fft3(theta);
        for (std::size_t p = 0; p < k_hat.size(); ++p) k_hat[p] = data_hat[p] + mu * k_hat[p];
        x = tv_x_core(k_hat, folded, spec, mu, gamma, denom);

        // u-update by isotropic shrinkage of nu = Lx + dual
        std::array<Volume3D, 3> lx{diff_forward(x, Axis::Rows), diff_forward(x, Axis::Cols),
                                   diff_forward(x, Axis::Slices)};
        std::array<Volume3D, 3> nu = lx;
        for (int a = 0; a < 3; ++a)
            for (std::size_t p = 0; p < nu[a].size(); ++p) nu[a][p] += dual[a][p];
        u = tv_shrink(nu[0], nu[1], nu[2], cfg.lambda / mu);

        // dual ascent: dual += Lx - u  (== nu - u)
        double residual = 0.0;
        for (int a = 0; a < 3; ++a)
            for (std::size_t p = 0; p < dual[a].size(); ++p) {
                dual[a][p] = nu[a][p] - u[a][p];
                const double r = lx[a][p] - u[a][p];
                residual += r * r;
            }

        const Volume3D z = decimate(blur_apply(x, lambda), spec);
        double fit = 0.0;
        for (std::size_t g = 0; g < z.size(); ++g) fit += (y[g] - z[g]) * (y[g] - z[g]);
        double tv = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p)
            tv += std::sqrt(lx[0][p] * lx[0][p] + lx[1][p] * lx[1][p] + lx[2][p] * lx[2][p]);
        report.objective.push_back(0.5 * fit + cfg.lambda * tv);
        report.primal_residual.push_back(std::sqrt(residual));
        report.iterations = iter;

        if (cfg.rel_tol > 0.0 && rel_change(x, x_prev) < cfg.rel_tol) break;
    }

    require_finite(x, "admm_tv");
    report.seconds = seconds_since(t0);
    return {std::move(x), std::move(report)};
}

}  // namespace volsr
