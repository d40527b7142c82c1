#include "volsr/fft.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace volsr {

namespace {

std::atomic<std::uint64_t> g_forward_count{0};
std::atomic<std::uint64_t> g_inverse_count{0};

// Plans are cached per (dims, sign). FFTW_UNALIGNED keeps them valid for
// any buffer via the new-array execute interface; the planner itself is
// not thread-safe, hence the mutex.
class PlanCache {
public:
    static fftw_plan get(const Dims3& dims, int sign) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto key = std::make_tuple(dims.m, dims.n, dims.s, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::vector<std::complex<double>> scratch_in(dims.count());
        std::vector<std::complex<double>> scratch_out(dims.count());
        // Axis 1 (m) varies fastest in our layout, so it is FFTW's last
        // (innermost) dimension.
        fftw_plan plan = fftw_plan_dft_3d(
            static_cast<int>(dims.s), static_cast<int>(dims.n), static_cast<int>(dims.m),
            reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw numeric_error("fft3: FFTW plan creation failed for " + to_string(dims));
        cache.plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, fftw_plan> plans_;
};

ComplexVolume3D execute(const ComplexVolume3D& v, int sign) {
    if (v.size() == 0) throw shape_error("fft3: empty volume");
    fftw_plan plan = PlanCache::get(v.dims(), sign);
    ComplexVolume3D out(v.dims());
    // fftw_execute_dft does not modify the input for out-of-place c2c plans.
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(v.data().data()));
    fftw_execute_dft(plan, in, reinterpret_cast<fftw_complex*>(out.data().data()));
    if (sign == FFTW_FORWARD)
        g_forward_count.fetch_add(1, std::memory_order_relaxed);
    else
        g_inverse_count.fetch_add(1, std::memory_order_relaxed);
    return out;
}

}  // namespace

ComplexVolume3D fft3(const ComplexVolume3D& v) {
    ComplexVolume3D out = execute(v, FFTW_FORWARD);
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& z : out.data()) z *= scale;
    return out;
}

ComplexVolume3D fft3(const Volume3D& v) { return fft3(to_complex(v)); }

ComplexVolume3D ifft3(const ComplexVolume3D& v) {
    ComplexVolume3D out = execute(v, FFTW_BACKWARD);
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& z : out.data()) z *= scale;
    return out;
}

Volume3D ifft3_real(const ComplexVolume3D& v, double max_rel_imag) {
    ComplexVolume3D full = ifft3(v);
    double imag_sq = 0.0, total_sq = 0.0;
    for (const auto& z : full.data()) {
        imag_sq += z.imag() * z.imag();
        total_sq += std::norm(z);
    }
    if (total_sq > 0.0 && std::sqrt(imag_sq / total_sq) > max_rel_imag)
        throw numeric_error("ifft3_real: imaginary residue " +
                            std::to_string(std::sqrt(imag_sq / total_sq)) +
                            " exceeds " + std::to_string(max_rel_imag) +
                            " (spectral bookkeeping bug?)");
    Volume3D out(v.dims());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = full[p].real();
    return out;
}

ComplexVolume3D dft3_unnormalized(const Volume3D& v) {
    return execute(to_complex(v), FFTW_FORWARD);
}

FftCounters fft_counters() {
    return {g_forward_count.load(std::memory_order_relaxed),
            g_inverse_count.load(std::memory_order_relaxed)};
}

void reset_fft_counters() {
    g_forward_count.store(0, std::memory_order_relaxed);
    g_inverse_count.store(0, std::memory_order_relaxed);
}

}  // namespace volsr
