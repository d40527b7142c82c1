#include "volsr/volume.hpp"

#include <cmath>

namespace volsr {

std::string to_string(const Dims3& d) {
    return std::to_string(d.m) + "x" + std::to_string(d.n) + "x" + std::to_string(d.s);
}

Volume3D::Volume3D(const Dims3& dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
    if (data_.size() != dims_.count())
        throw shape_error("Volume3D: data length " + std::to_string(data_.size()) +
                          " does not match dims " + to_string(dims_));
}

ComplexVolume3D::ComplexVolume3D(const Dims3& dims, std::vector<value_type> data)
    : dims_(dims), data_(std::move(data)) {
    if (data_.size() != dims_.count())
        throw shape_error("ComplexVolume3D: data length " + std::to_string(data_.size()) +
                          " does not match dims " + to_string(dims_));
}

void require_same_dims(const Dims3& a, const Dims3& b, const char* where) {
    if (!(a == b))
        throw shape_error(std::string(where) + ": dims mismatch, " + to_string(a) + " vs " +
                          to_string(b));
}

void require_finite(const Volume3D& v, const char* where) {
    for (std::size_t p = 0; p < v.size(); ++p)
        if (!std::isfinite(v[p]))
            throw numeric_error(std::string(where) + ": non-finite value at flat index " +
                                std::to_string(p));
}

double dot(const Volume3D& a, const Volume3D& b) {
    require_same_dims(a.dims(), b.dims(), "dot");
    double acc = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) acc += a[p] * b[p];
    return acc;
}

double norm2(const Volume3D& a) { return std::sqrt(dot(a, a)); }

std::complex<double> dot(const ComplexVolume3D& a, const ComplexVolume3D& b) {
    require_same_dims(a.dims(), b.dims(), "dot");
    std::complex<double> acc = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) acc += std::conj(a[p]) * b[p];
    return acc;
}

double norm2(const ComplexVolume3D& a) {
    double acc = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) acc += std::norm(a[p]);
    return std::sqrt(acc);
}

ComplexVolume3D to_complex(const Volume3D& v) {
    ComplexVolume3D out(v.dims());
    for (std::size_t p = 0; p < v.size(); ++p) out[p] = v[p];
    return out;
}

}  // namespace volsr
