#pragma once

#include <array>
#include <optional>

#include "volsr/spectral.hpp"

namespace volsr {

struct TikhonovConfig {
    double lambda = 0.01;  // no reference value exists for the synthetic test; tune per dataset
    Volume3D xbar;         // prior estimate, HR dims
};

struct SolveReport {
    std::size_t iterations = 0;
    double initial_objective = 0.0;
    std::vector<double> objective;        // one entry per iteration
    std::vector<double> primal_residual;  // ||Lx - u||_2 (or ||Hx - v||_2) per iteration
    double seconds = 0.0;
};

/// Closed-form l2-l2 solver bound to a fixed blur, decimation and prior.
/// Construction precomputes the folded spectrum, its gram diagonal and the
/// prior spectrum; solve() then costs exactly one forward and one inverse
/// 3D FFT plus element-wise work.
class TikhonovOperator {
public:
    TikhonovOperator(const SpectrumDiag& lambda, const DecimationSpec& spec,
                     const TikhonovConfig& cfg);

    Volume3D solve(const Volume3D& y) const;

    const DecimationSpec& spec() const { return spec_; }

private:
    DecimationSpec spec_;
    SpectrumDiag lambda_;
    FoldedSpectrum folded_;
    Volume3D denom_;           // 2*lambda*d + gram diagonal, LR grid
    ComplexVolume3D xbar_hat_;
    double reg_;
};

/// Exact minimizer of the l2-l2 objective via the LR-diagonal inversion.
Volume3D tikhonov_fast(const Volume3D& y, const SpectrumDiag& lambda, const DecimationSpec& spec,
                       const TikhonovConfig& cfg);

/// Dense normal-equations oracle for the same minimizer. Asserts the system
/// matrix is SPD before solving. Size-guarded.
Volume3D dense_tikhonov(const Volume3D& y, const Volume3D& psf, const DecimationSpec& spec,
                        const TikhonovConfig& cfg);

struct AdmmL2State {
    Volume3D x, v, dual;  // all HR dims
};

struct AdmmL2Options {
    double mu = 0.1;
    double rel_tol = 1e-10;
    std::optional<AdmmL2State> warm_start;
};

/// Iterative baseline for the l2-l2 problem: ADMM with the split v = Hx.
/// Converges to the tikhonov_fast minimizer; exists to reproduce the
/// closed-form-vs-iterative comparison, not to be fast.
std::pair<Volume3D, SolveReport> admm_l2l2(const Volume3D& y, const SpectrumDiag& lambda,
                                           const DecimationSpec& spec, const TikhonovConfig& cfg,
                                           std::size_t max_iters,
                                           const AdmmL2Options& opts = {});

struct TvAdmmConfig {
    double lambda = 0.06;
    double mu = 0.1;
    std::size_t max_iters = 30;
    double rel_tol = 1e-6;
    /// DC floor for the difference-operator gram inverse; absent -> 1e-8*mu.
    std::optional<double> tau;

    enum class Init { Zero, UpsampledObservation, Provided };
    Init init = Init::Zero;
    Volume3D init_volume;  // used when init == Provided
};

/// One TV ADMM x-update: the minimizer of
///   1/2 ||y - DHx||^2 + mu/2 ||Lx - rho||^2   (+ mu*tau/2 ||x||^2 via gamma)
/// where theta_hat is the spectrum of L^H rho and gamma the strictly positive
/// per-frequency inverse of the difference gram (with its DC floor).
Volume3D tv_x_update(const Volume3D& y, const FoldedSpectrum& folded, const SpectrumDiag& lambda,
                     const DecimationSpec& spec, double mu, const ComplexVolume3D& theta_hat,
                     const Volume3D& gamma);

/// Dense oracle for tv_x_update: solves
///   (H^H D_mask H + mu L^H L + mu*tau I) x = H^H D^H y + mu*theta.
Volume3D dense_tv_x_update(const Volume3D& y, const Volume3D& psf, const DecimationSpec& spec,
                           double mu, const Volume3D& theta, double tau);

/// Voxelwise isotropic shrinkage: the 3-vector (nu1,nu2,nu3)[j] is scaled by
/// max(0, 1 - threshold/||.||); the zero vector maps to zero.
std::array<Volume3D, 3> tv_shrink(const Volume3D& nu1, const Volume3D& nu2, const Volume3D& nu3,
                                  double threshold);

/// Full TV-regularized solver: spectral precomputation, then per iteration
/// one x-update, one shrinkage, one dual ascent. Stops at max_iters or when
/// the relative x-change drops below rel_tol.
std::pair<Volume3D, SolveReport> admm_tv(const Volume3D& y, const Volume3D& psf,
                                         const DecimationSpec& spec, const TvAdmmConfig& cfg);

/// 1/2 ||y - DHx||^2 + lambda * sum_j ||(L x)[j]||_2 with the voxelwise
/// isotropic TV matching tv_shrink's prox.
double objective_tv(const Volume3D& x, const Volume3D& y, const SpectrumDiag& lambda,
                    const DecimationSpec& spec, double tv_weight);

/// Gamma = 1/(|S_r|^2 + |S_c|^2 + |S_s|^2 + tau) over the HR frequency grid.
/// Throws if any denominator entry is nonpositive (tau = 0 leaves the DC
/// frequency singular).
Volume3D make_gamma(const DiffSpectra& diffs, double tau);

}  // namespace volsr
