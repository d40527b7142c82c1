#pragma once

#include <cstdint>

#include "volsr/volume.hpp"

namespace volsr {

/// Unitary 3D Fourier transform: fft3 applies F with F^H = F^{-1}, so
/// ifft3(fft3(v)) == v and energy is preserved (Parseval). Frequencies use
/// the same lexicographic ordering as voxels.
ComplexVolume3D fft3(const Volume3D& v);
ComplexVolume3D fft3(const ComplexVolume3D& v);
ComplexVolume3D ifft3(const ComplexVolume3D& v);

/// ifft3 for spectra of real-valued volumes. The imaginary residue is
/// checked against `max_rel_imag` (L2, relative to the full result) and
/// discarded; a violation signals a spectral bookkeeping bug upstream.
Volume3D ifft3_real(const ComplexVolume3D& v, double max_rel_imag = 1e-8);

/// Unnormalized forward DFT (no 1/sqrt(N)); eigenvalue convention for
/// circulant operators.
ComplexVolume3D dft3_unnormalized(const Volume3D& v);

/// Cumulative 3D transform counts, for asserting FFT budgets.
struct FftCounters {
    std::uint64_t forward = 0;
    std::uint64_t inverse = 0;
};
FftCounters fft_counters();
void reset_fft_counters();

}  // namespace volsr
