#include "augens/spectral/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "augens/error.hpp"

namespace augens::spectral {

namespace {

enum class PlanKind { dct, idct, fft_forward, fft_backward };

// FFTW's planner is not reentrant; executing an existing plan on new arrays
// is. Plans are created once per (kind, shape) and kept for the process.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(PlanKind kind, std::size_t rows, std::size_t cols) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(kind, rows, cols);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int n0 = static_cast<int>(rows), n1 = static_cast<int>(cols);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        if (kind == PlanKind::dct || kind == PlanKind::idct) {
            std::vector<double> in(rows * cols), out(rows * cols);
            const fftw_r2r_kind k = kind == PlanKind::dct ? FFTW_REDFT10 : FFTW_REDFT01;
            plan = fftw_plan_r2r_2d(n0, n1, in.data(), out.data(), k, k, flags);
        } else {
            std::vector<fftw_complex> in(rows * cols), out(rows * cols);
            const int sign = kind == PlanKind::fft_forward ? FFTW_FORWARD : FFTW_BACKWARD;
            plan = fftw_plan_dft_2d(n0, n1, in.data(), out.data(), sign, flags);
        }
        require(plan != nullptr, ErrorCode::invalid_argument, "FFTW planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<PlanKind, std::size_t, std::size_t>, fftw_plan> plans_;
};

void require_nonempty(std::size_t rows, std::size_t cols) {
    require(rows > 0 && cols > 0, ErrorCode::invalid_argument, "empty plane");
}

// Orthonormal DCT-II scale for index k of an n-point transform, relative to
// FFTW's REDFT10 (which computes 2 * sum x cos(...)).
double dct_scale(std::size_t k, std::size_t n) {
    return k == 0 ? std::sqrt(1.0 / (4.0 * n)) : std::sqrt(1.0 / (2.0 * n));
}

// Pre-scale for REDFT01 so that it evaluates the orthonormal DCT-III.
double idct_scale(std::size_t k, std::size_t n) {
    return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(1.0 / (2.0 * n));
}

ComplexPlane run_dft(const ComplexPlane& in, PlanKind kind) {
    require_nonempty(in.rows, in.cols);
    ComplexPlane out(in.rows, in.cols);
    fftw_plan plan = PlanCache::instance().get(kind, in.rows, in.cols);
    // std::complex<double> is layout-compatible with fftw_complex.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.values.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.values.data());
    fftw_execute_dft(plan, src, dst);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in.rows * in.cols));
    for (auto& v : out.values) v *= scale;
    return out;
}

}  // namespace

Plane dct2(const Plane& plane) {
    require_nonempty(plane.rows, plane.cols);
    Plane out(plane.rows, plane.cols);
    fftw_plan plan = PlanCache::instance().get(PlanKind::dct, plane.rows, plane.cols);
    fftw_execute_r2r(plan, const_cast<double*>(plane.values.data()), out.values.data());
    for (std::size_t r = 0; r < out.rows; ++r) {
        const double sr = dct_scale(r, out.rows);
        for (std::size_t c = 0; c < out.cols; ++c) out(r, c) *= sr * dct_scale(c, out.cols);
    }
    return out;
}

Plane idct2(const Plane& coeffs) {
    require_nonempty(coeffs.rows, coeffs.cols);
    Plane scaled = coeffs;
    for (std::size_t r = 0; r < scaled.rows; ++r) {
        const double sr = idct_scale(r, scaled.rows);
        for (std::size_t c = 0; c < scaled.cols; ++c) scaled(r, c) *= sr * idct_scale(c, scaled.cols);
    }
    Plane out(coeffs.rows, coeffs.cols);
    fftw_plan plan = PlanCache::instance().get(PlanKind::idct, coeffs.rows, coeffs.cols);
    fftw_execute_r2r(plan, scaled.values.data(), out.values.data());
    return out;
}

ComplexPlane fft2(const Plane& plane) {
    ComplexPlane in(plane.rows, plane.cols);
    for (std::size_t i = 0; i < plane.size(); ++i) in.values[i] = plane.values[i];
    return run_dft(in, PlanKind::fft_forward);
}

ComplexPlane fft2(const ComplexPlane& plane) { return run_dft(plane, PlanKind::fft_forward); }

ComplexPlane ifft2(const ComplexPlane& spectrum) { return run_dft(spectrum, PlanKind::fft_backward); }

Plane ifft2_real(const ComplexPlane& spectrum) {
    const ComplexPlane z = ifft2(spectrum);
    Plane out(z.rows, z.cols);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = z.values[i].real();
    return out;
}

}  // namespace augens::spectral
