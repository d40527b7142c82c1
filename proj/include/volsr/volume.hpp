#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace volsr {

/// Two volumes (or a volume and an operator) disagree on grid dimensions.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numeric computation failed (singular system, non-finite values, ...).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File-format or filesystem problem.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Voxel grid extents. Axis 1 (m) is the fastest-varying index in memory,
/// axis 3 (s) the slowest.
struct Dims3 {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t s = 0;

    std::size_t count() const { return m * n * s; }
    bool operator==(const Dims3&) const = default;
};

std::string to_string(const Dims3& d);

/// Flat index of voxel (i, j, k): i + m*j + m*n*k.
inline std::size_t lex_index(std::size_t i, std::size_t j, std::size_t k, const Dims3& dims) {
    if (i >= dims.m || j >= dims.n || k >= dims.s)
        throw std::out_of_range("lex_index: voxel (" + std::to_string(i) + "," + std::to_string(j) +
                                "," + std::to_string(k) + ") outside grid " + to_string(dims));
    return i + dims.m * j + dims.m * dims.n * k;
}

/// Real-valued 3D voxel grid, stored lexicographically (axis 1 fastest).
class Volume3D {
public:
    Volume3D() = default;
    explicit Volume3D(const Dims3& dims, double fill = 0.0)
        : dims_(dims), data_(dims.count(), fill) {}
    Volume3D(const Dims3& dims, std::vector<double> data);

    const Dims3& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[lex_index(i, j, k, dims_)];
    }
    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[lex_index(i, j, k, dims_)];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    Dims3 dims_;
    std::vector<double> data_;
};

/// Complex-valued companion of Volume3D, same ordering. Holds spectra and
/// frequency-domain intermediates.
class ComplexVolume3D {
public:
    using value_type = std::complex<double>;

    ComplexVolume3D() = default;
    explicit ComplexVolume3D(const Dims3& dims, value_type fill = {})
        : dims_(dims), data_(dims.count(), fill) {}
    ComplexVolume3D(const Dims3& dims, std::vector<value_type> data);

    const Dims3& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    value_type operator[](std::size_t flat) const { return data_[flat]; }
    value_type& operator[](std::size_t flat) { return data_[flat]; }
    value_type at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[lex_index(i, j, k, dims_)];
    }
    value_type& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[lex_index(i, j, k, dims_)];
    }

    const std::vector<value_type>& data() const { return data_; }
    std::vector<value_type>& data() { return data_; }

private:
    Dims3 dims_;
    std::vector<value_type> data_;
};

void require_same_dims(const Dims3& a, const Dims3& b, const char* where);

/// Throws numeric_error if any voxel is NaN or Inf.
void require_finite(const Volume3D& v, const char* where);

double dot(const Volume3D& a, const Volume3D& b);
double norm2(const Volume3D& a);
std::complex<double> dot(const ComplexVolume3D& a, const ComplexVolume3D& b);  // conj(a).b
double norm2(const ComplexVolume3D& a);

ComplexVolume3D to_complex(const Volume3D& v);

}  // namespace volsr
