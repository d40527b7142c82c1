#include "volsr/spectral.hpp"

#include "volsr/dense.hpp"

namespace volsr {

ComplexVolume3D alias_fold(const ComplexVolume3D& hr_spectrum, const DecimationSpec& spec) {
    require_same_dims(hr_spectrum.dims(), spec.hr(), "alias_fold");
    const Dims3& lr = spec.lr();
    ComplexVolume3D out(lr);
    for (std::size_t bs = 0; bs < spec.ds(); ++bs)
        for (std::size_t bc = 0; bc < spec.dc(); ++bc)
            for (std::size_t br = 0; br < spec.dr(); ++br)
                for (std::size_t g3 = 0; g3 < lr.s; ++g3)
                    for (std::size_t g2 = 0; g2 < lr.n; ++g2)
                        for (std::size_t g1 = 0; g1 < lr.m; ++g1)
                            out.at(g1, g2, g3) += hr_spectrum.at(
                                g1 + br * lr.m, g2 + bc * lr.n, g3 + bs * lr.s);
    return out;
}

ComplexVolume3D alias_expand(const ComplexVolume3D& lr_spectrum, const DecimationSpec& spec) {
    require_same_dims(lr_spectrum.dims(), spec.lr(), "alias_expand");
    const Dims3& lr = spec.lr();
    ComplexVolume3D out(spec.hr());
    for (std::size_t bs = 0; bs < spec.ds(); ++bs)
        for (std::size_t bc = 0; bc < spec.dc(); ++bc)
            for (std::size_t br = 0; br < spec.dr(); ++br)
                for (std::size_t g3 = 0; g3 < lr.s; ++g3)
                    for (std::size_t g2 = 0; g2 < lr.n; ++g2)
                        for (std::size_t g1 = 0; g1 < lr.m; ++g1)
                            out.at(g1 + br * lr.m, g2 + bc * lr.n, g3 + bs * lr.s) =
                                lr_spectrum.at(g1, g2, g3);
    return out;
}

FoldedSpectrum::FoldedSpectrum(const SpectrumDiag& lambda, const DecimationSpec& spec)
    : spec_(spec) {
    require_same_dims(lambda.dims(), spec.hr(), "FoldedSpectrum");
    const Dims3& lr = spec.lr();
    const std::size_t nl = lr.count();
    blocks_.resize(spec.hr().count());
    hr_index_.resize(spec.hr().count());
    std::size_t b_lin = 0;
    for (std::size_t bs = 0; bs < spec.ds(); ++bs)
        for (std::size_t bc = 0; bc < spec.dc(); ++bc)
            for (std::size_t br = 0; br < spec.dr(); ++br, ++b_lin)
                for (std::size_t g3 = 0; g3 < lr.s; ++g3)
                    for (std::size_t g2 = 0; g2 < lr.n; ++g2)
                        for (std::size_t g1 = 0; g1 < lr.m; ++g1) {
                            const std::size_t g = lex_index(g1, g2, g3, lr);
                            const std::size_t hr = lex_index(g1 + br * lr.m, g2 + bc * lr.n,
                                                             g3 + bs * lr.s, spec.hr());
                            blocks_[b_lin * nl + g] = lambda.values[hr];
                            hr_index_[b_lin * nl + g] = hr;
                        }
}

std::complex<double> FoldedSpectrum::block_value(std::size_t br, std::size_t bc, std::size_t bs,
                                                 std::size_t g) const {
    if (br >= spec_.dr() || bc >= spec_.dc() || bs >= spec_.ds())
        throw std::out_of_range("FoldedSpectrum::block_value: block offset out of range");
    const std::size_t b_lin = br + spec_.dr() * bc + spec_.dr() * spec_.dc() * bs;
    return blocks_[b_lin * spec_.lr().count() + g];
}

ComplexVolume3D FoldedSpectrum::apply(const ComplexVolume3D& hr_spectrum) const {
    require_same_dims(hr_spectrum.dims(), spec_.hr(), "FoldedSpectrum::apply");
    const std::size_t nl = spec_.lr().count();
    ComplexVolume3D out(spec_.lr());
    for (std::size_t b = 0; b < spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g)
            out[g] += blocks_[b * nl + g] * hr_spectrum[hr_index_[b * nl + g]];
    return out;
}

ComplexVolume3D FoldedSpectrum::apply_adjoint(const ComplexVolume3D& lr_spectrum) const {
    require_same_dims(lr_spectrum.dims(), spec_.lr(), "FoldedSpectrum::apply_adjoint");
    const std::size_t nl = spec_.lr().count();
    ComplexVolume3D out(spec_.hr());
    for (std::size_t b = 0; b < spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g)
            out[hr_index_[b * nl + g]] = std::conj(blocks_[b * nl + g]) * lr_spectrum[g];
    return out;
}

ComplexVolume3D FoldedSpectrum::apply_weighted(const ComplexVolume3D& hr_spectrum,
                                               const Volume3D& hr_weights) const {
    require_same_dims(hr_spectrum.dims(), spec_.hr(), "FoldedSpectrum::apply_weighted");
    require_same_dims(hr_weights.dims(), spec_.hr(), "FoldedSpectrum::apply_weighted");
    const std::size_t nl = spec_.lr().count();
    ComplexVolume3D out(spec_.lr());
    for (std::size_t b = 0; b < spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g) {
            const std::size_t hr = hr_index_[b * nl + g];
            out[g] += blocks_[b * nl + g] * hr_weights[hr] * hr_spectrum[hr];
        }
    return out;
}

ComplexVolume3D FoldedSpectrum::apply_adjoint_weighted(const ComplexVolume3D& lr_spectrum,
                                                       const Volume3D& hr_weights) const {
    require_same_dims(lr_spectrum.dims(), spec_.lr(), "FoldedSpectrum::apply_adjoint_weighted");
    require_same_dims(hr_weights.dims(), spec_.hr(), "FoldedSpectrum::apply_adjoint_weighted");
    const std::size_t nl = spec_.lr().count();
    ComplexVolume3D out(spec_.hr());
    for (std::size_t b = 0; b < spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g) {
            const std::size_t hr = hr_index_[b * nl + g];
            out[hr] = hr_weights[hr] * std::conj(blocks_[b * nl + g]) * lr_spectrum[g];
        }
    return out;
}

void FoldedSpectrum::swap_blocks_for_fault_injection() {
    if (spec_.rate() < 2) return;
    const std::size_t nl = spec_.lr().count();
    for (std::size_t g = 0; g < nl; ++g) std::swap(blocks_[g], blocks_[nl + g]);
}

FoldedSpectrum fold_lambda(const SpectrumDiag& lambda, const DecimationSpec& spec) {
    return FoldedSpectrum(lambda, spec);
}

Volume3D gram_diag(const FoldedSpectrum& folded) {
    const std::size_t nl = folded.spec_.lr().count();
    Volume3D out(folded.spec_.lr());
    for (std::size_t b = 0; b < folded.spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g) out[g] += std::norm(folded.blocks_[b * nl + g]);
    return out;
}

Volume3D gram_diag_weighted(const FoldedSpectrum& folded, const Volume3D& hr_weights) {
    require_same_dims(hr_weights.dims(), folded.spec_.hr(), "gram_diag_weighted");
    const std::size_t nl = folded.spec_.lr().count();
    Volume3D out(folded.spec_.lr());
    for (std::size_t b = 0; b < folded.spec_.rate(); ++b)
        for (std::size_t g = 0; g < nl; ++g)
            out[g] += hr_weights[folded.hr_index_[b * nl + g]] *
                      std::norm(folded.blocks_[b * nl + g]);
    return out;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd ones_kron_identity(std::size_t d, std::size_t len) {
    return kron(Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)),
                Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(len),
                                          static_cast<Eigen::Index>(len))) /
           static_cast<double>(d);
}

}  // namespace

double verify_eq8(const DecimationSpec& spec) {
    require_dense_size(spec.hr().count(), "verify_eq8");
    const Eigen::MatrixXd D = build_dense_decimation(spec);
    const Eigen::MatrixXcd F = build_dense_dft(spec.hr());
    const Eigen::MatrixXd mask = D.transpose() * D;  // D_underline
    const Eigen::MatrixXcd lhs = F * mask * F.adjoint();

    // Slice factor outermost, row factor innermost (axis 3 is the slowest
    // lexicographic index).
    const Eigen::MatrixXd rhs =
        kron(ones_kron_identity(spec.ds(), spec.lr().s),
             kron(ones_kron_identity(spec.dc(), spec.lr().n),
                  ones_kron_identity(spec.dr(), spec.lr().m)));

    return (lhs - rhs.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
}

}  // namespace volsr
