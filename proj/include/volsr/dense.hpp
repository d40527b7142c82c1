#pragma once

#include <Eigen/Dense>

#include "volsr/operators.hpp"

namespace volsr {

/// Size guard shared by all dense constructions.
inline constexpr std::size_t kDenseMaxVoxels = 4096;

void require_dense_size(std::size_t n, const char* where);

/// Selection matrix D in R^{N_l x N_h}: exactly one 1 per row.
Eigen::MatrixXd build_dense_decimation(const DecimationSpec& spec);

/// Circulant blur H in R^{N_h x N_h} built by shifting the padded PSF.
Eigen::MatrixXd build_dense_blur(const Volume3D& psf);

/// Unitary 3D DFT matrix over the lexicographic grid.
Eigen::MatrixXcd build_dense_dft(const Dims3& dims);

/// Periodic forward-difference matrix along one axis.
Eigen::MatrixXd build_dense_diff(const Dims3& dims, Axis axis);

Eigen::VectorXd to_eigen(const Volume3D& v);
Volume3D from_eigen(const Eigen::VectorXd& v, const Dims3& dims);
Eigen::VectorXcd to_eigen(const ComplexVolume3D& v);

}  // namespace volsr
