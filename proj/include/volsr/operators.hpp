#pragma once

#include <array>

#include "volsr/fft.hpp"
#include "volsr/volume.hpp"

namespace volsr {

/// Integer decimation rates binding an HR grid to an LR grid; each rate must
/// divide its axis. Sampling phase is 0: voxel (0,0,0) is retained.
struct DecimationSpec {
    DecimationSpec(const Dims3& hr_dims, std::array<std::size_t, 3> rates);

    const Dims3& hr() const { return hr_; }
    const Dims3& lr() const { return lr_; }
    std::size_t dr() const { return rates_[0]; }
    std::size_t dc() const { return rates_[1]; }
    std::size_t ds() const { return rates_[2]; }
    /// Total rate d = dr*dc*ds (the r of the LR-diagonal inverses).
    std::size_t rate() const { return rates_[0] * rates_[1] * rates_[2]; }

private:
    Dims3 hr_;
    Dims3 lr_;
    std::array<std::size_t, 3> rates_;
};

/// Complex per-frequency diagonal of a circulant HR operator.
struct SpectrumDiag {
    ComplexVolume3D values;
    const Dims3& dims() const { return values.dims(); }
};

/// Blur kernel description: odd extents plus either per-axis Gaussian sigmas
/// or explicit weights (normalized to unit sum on construction).
struct PsfSpec {
    std::array<std::size_t, 3> size{1, 1, 1};
    std::array<double, 3> sigma{0.0, 0.0, 0.0};
    std::vector<double> weights;  // empty -> sampled Gaussian

    static PsfSpec gaussian(std::array<std::size_t, 3> size, std::array<double, 3> sigma);
    static PsfSpec explicit_kernel(std::array<std::size_t, 3> size, std::vector<double> weights);
};

/// Samples the kernel, normalizes it to unit sum, and embeds it in an HR-sized
/// volume with the kernel center wrapped to voxel (0,0,0) — the first column
/// of the cyclic blur operator.
Volume3D make_gaussian_psf(const PsfSpec& spec, const Dims3& hr_dims);

/// Eigenvalues of the cyclic blur: unnormalized DFT of the padded PSF.
SpectrumDiag psf_to_spectrum(const Volume3D& psf);

/// Cyclic convolution via the spectral factorization H = F^H Lambda F
/// (conjugate=true applies H^H).
Volume3D blur_apply(const Volume3D& x, const SpectrumDiag& lambda, bool conjugate = false);

/// y[i,j,k] = x[i*dr, j*dc, k*ds].
Volume3D decimate(const Volume3D& x, const DecimationSpec& spec);

/// Zero interpolation: samples back at stride positions, zeros elsewhere.
/// Satisfies D D^H = I exactly.
Volume3D decimate_adjoint(const Volume3D& y, const DecimationSpec& spec);

/// Nearest-neighbor upsampling: each LR voxel replicated over its HR block.
Volume3D nn_upsample(const Volume3D& y, const DecimationSpec& spec);

/// d * D^H y — zero-fill upsampling scaled to preserve the mean.
Volume3D zero_fill_upsample(const Volume3D& y, const DecimationSpec& spec);

enum class Axis { Rows = 0, Cols = 1, Slices = 2 };

/// First-order forward difference with periodic boundary along one axis.
Volume3D diff_forward(const Volume3D& x, Axis axis);
/// Adjoint of diff_forward (negated backward difference).
Volume3D diff_adjoint(const Volume3D& x, Axis axis);

struct DiffSpectra {
    SpectrumDiag rows, cols, slices;
    const SpectrumDiag& along(Axis a) const {
        return a == Axis::Rows ? rows : (a == Axis::Cols ? cols : slices);
    }
};

/// Spectra of the three difference operators (kernel [-1,+1], periodic), so
/// each is circulant and diagonal in Fourier. Exactly zero at DC.
DiffSpectra finite_diff_spectra(const Dims3& hr_dims);

}  // namespace volsr
