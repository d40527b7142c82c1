#pragma once

#include "volsr/operators.hpp"

namespace volsr {

/// Sums the d = dr*dc*ds frequency blocks of an HR spectrum that alias onto
/// each LR frequency: out[g] = sum over block offsets b of
/// in[g_r + b_r*m_l, g_c + b_c*n_l, g_s + b_s*s_l]. Blocks are contiguous
/// chunks along each axis, which is what the Kronecker structure of the
/// decimation mask dictates under lexicographic ordering.
ComplexVolume3D alias_fold(const ComplexVolume3D& hr_spectrum, const DecimationSpec& spec);

/// Adjoint of alias_fold: replicates an LR spectrum into every block.
ComplexVolume3D alias_expand(const ComplexVolume3D& lr_spectrum, const DecimationSpec& spec);

/// The aliased N_l x N_h block form of a blur spectrum: d diagonal LR-sized
/// blocks, block (b_r,b_c,b_s) holding Lambda at the corresponding HR
/// frequencies. apply()/apply_adjoint() realize the operator and its
/// conjugate transpose without materializing the matrix.
class FoldedSpectrum {
public:
    FoldedSpectrum(const SpectrumDiag& lambda, const DecimationSpec& spec);

    const DecimationSpec& spec() const { return spec_; }

    /// Value of block (br,bc,bs) at LR frequency flat index g.
    std::complex<double> block_value(std::size_t br, std::size_t bc, std::size_t bs,
                                     std::size_t g) const;

    /// Lambda_fold * vhat: LR spectrum alias_fold(Lambda .* vhat).
    ComplexVolume3D apply(const ComplexVolume3D& hr_spectrum) const;

    /// Lambda_fold^H * what: conj(Lambda) .* alias_expand(what).
    ComplexVolume3D apply_adjoint(const ComplexVolume3D& lr_spectrum) const;

    /// The per-entry product Lambda .* vhat folded with extra per-frequency
    /// real weights: alias_fold(weights .* Lambda .* vhat). Used by the TV
    /// x-update where the Gamma weighting rides along.
    ComplexVolume3D apply_weighted(const ComplexVolume3D& hr_spectrum,
                                   const Volume3D& hr_weights) const;
    ComplexVolume3D apply_adjoint_weighted(const ComplexVolume3D& lr_spectrum,
                                           const Volume3D& hr_weights) const;

    /// Test hook: swaps two stored blocks, deliberately corrupting the fold.
    void swap_blocks_for_fault_injection();

private:
    friend Volume3D gram_diag(const FoldedSpectrum&);
    friend Volume3D gram_diag_weighted(const FoldedSpectrum&, const Volume3D&);

    DecimationSpec spec_;
    // Block-major storage: blocks_[b_lin * N_l + g], b_lin lexicographic in
    // (b_r, b_c, b_s). Total entries = N_h.
    std::vector<std::complex<double>> blocks_;
    // HR flat index of each stored entry, same layout as blocks_.
    std::vector<std::size_t> hr_index_;
};

/// Algorithm step "Compute Lambda_fold".
FoldedSpectrum fold_lambda(const SpectrumDiag& lambda, const DecimationSpec& spec);

/// Diagonal of Lambda_fold * Lambda_fold^H: per LR frequency, the sum of
/// squared block magnitudes. Real and nonnegative.
Volume3D gram_diag(const FoldedSpectrum& folded);

/// Diagonal of Lambda_fold * diag(weights) * Lambda_fold^H.
Volume3D gram_diag_weighted(const FoldedSpectrum& folded, const Volume3D& hr_weights);

/// Dense check of the central decomposition: builds F and D, forms
/// F D^H D F^H numerically, builds the Kronecker right-hand side
/// (1/ds)(J⊗I) ⊗ (1/dc)(J⊗I) ⊗ (1/dr)(J⊗I) explicitly, and returns the max
/// absolute entry difference. Catches any interleaved-vs-contiguous block
/// mistake.
double verify_eq8(const DecimationSpec& spec);

}  // namespace volsr
