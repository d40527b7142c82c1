#include "volsr/dense.hpp"

#include <numbers>

namespace volsr {

void require_dense_size(std::size_t n, const char* where) {
    if (n > kDenseMaxVoxels)
        throw std::invalid_argument(std::string(where) + ": dense size guard exceeded (" +
                                    std::to_string(n) + " > " + std::to_string(kDenseMaxVoxels) +
                                    " voxels)");
}

Eigen::MatrixXd build_dense_decimation(const DecimationSpec& spec) {
    require_dense_size(spec.hr().count(), "build_dense_decimation");
    const Dims3& lr = spec.lr();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lr.count()),
                                              static_cast<Eigen::Index>(spec.hr().count()));
    for (std::size_t k = 0; k < lr.s; ++k)
        for (std::size_t j = 0; j < lr.n; ++j)
            for (std::size_t i = 0; i < lr.m; ++i) {
                const std::size_t row = lex_index(i, j, k, lr);
                const std::size_t col =
                    lex_index(i * spec.dr(), j * spec.dc(), k * spec.ds(), spec.hr());
                D(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
            }
    return D;
}

Eigen::MatrixXd build_dense_blur(const Volume3D& psf) {
    const Dims3& d = psf.dims();
    require_dense_size(d.count(), "build_dense_blur");
    const auto N = static_cast<Eigen::Index>(d.count());
    Eigen::MatrixXd H(N, N);
    // Column q is the padded PSF cyclically shifted to voxel q.
    for (std::size_t kq = 0; kq < d.s; ++kq)
        for (std::size_t jq = 0; jq < d.n; ++jq)
            for (std::size_t iq = 0; iq < d.m; ++iq) {
                const std::size_t q = lex_index(iq, jq, kq, d);
                for (std::size_t kp = 0; kp < d.s; ++kp)
                    for (std::size_t jp = 0; jp < d.n; ++jp)
                        for (std::size_t ip = 0; ip < d.m; ++ip) {
                            const std::size_t p = lex_index(ip, jp, kp, d);
                            const std::size_t di = (ip + d.m - iq) % d.m;
                            const std::size_t dj = (jp + d.n - jq) % d.n;
                            const std::size_t dk = (kp + d.s - kq) % d.s;
                            H(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
                                psf.at(di, dj, dk);
                        }
            }
    return H;
}

Eigen::MatrixXcd build_dense_dft(const Dims3& dims) {
    require_dense_size(dims.count(), "build_dense_dft");
    const auto N = static_cast<Eigen::Index>(dims.count());
    Eigen::MatrixXcd F(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.count()));
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t fs = 0; fs < dims.s; ++fs)
        for (std::size_t fc = 0; fc < dims.n; ++fc)
            for (std::size_t fr = 0; fr < dims.m; ++fr) {
                const std::size_t row = lex_index(fr, fc, fs, dims);
                for (std::size_t k = 0; k < dims.s; ++k)
                    for (std::size_t j = 0; j < dims.n; ++j)
                        for (std::size_t i = 0; i < dims.m; ++i) {
                            const std::size_t col = lex_index(i, j, k, dims);
                            const double ang =
                                two_pi * (static_cast<double>(fr * i) / static_cast<double>(dims.m) +
                                          static_cast<double>(fc * j) / static_cast<double>(dims.n) +
                                          static_cast<double>(fs * k) / static_cast<double>(dims.s));
                            F(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                                std::complex<double>(std::cos(ang) * scale, -std::sin(ang) * scale);
                        }
            }
    return F;
}

Eigen::MatrixXd build_dense_diff(const Dims3& dims, Axis axis) {
    require_dense_size(dims.count(), "build_dense_diff");
    const auto N = static_cast<Eigen::Index>(dims.count());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t k = 0; k < dims.s; ++k)
        for (std::size_t j = 0; j < dims.n; ++j)
            for (std::size_t i = 0; i < dims.m; ++i) {
                const std::size_t p = lex_index(i, j, k, dims);
                std::size_t ni = i, nj = j, nk = k;
                switch (axis) {
                    case Axis::Rows: ni = (i + 1) % dims.m; break;
                    case Axis::Cols: nj = (j + 1) % dims.n; break;
                    case Axis::Slices: nk = (k + 1) % dims.s; break;
                }
                const std::size_t q = lex_index(ni, nj, nk, dims);
                M(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += 1.0;
                M(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) -= 1.0;
            }
    return M;
}

Eigen::VectorXd to_eigen(const Volume3D& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data().data(),
                                             static_cast<Eigen::Index>(v.size()));
}

Volume3D from_eigen(const Eigen::VectorXd& v, const Dims3& dims) {
    if (static_cast<std::size_t>(v.size()) != dims.count())
        throw shape_error("from_eigen: length does not match dims " + to_string(dims));
    return Volume3D(dims, std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXcd to_eigen(const ComplexVolume3D& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data().data(),
                                              static_cast<Eigen::Index>(v.size()));
}

}  // namespace volsr
