#include "augens/spectral/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "augens/error.hpp"

namespace augens::spectral {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

std::pair<double, double> haar_pair(double a, double b) noexcept {
    return {(a + b) * kInvSqrt2, (a - b) * kInvSqrt2};
}

WaveletPlanes haar_dwt2(const Plane& plane) {
    require(plane.rows >= 1 && plane.cols >= 1, ErrorCode::invalid_argument, "empty plane");
    const std::size_t half_r = (plane.rows + 1) / 2;
    const std::size_t half_c = (plane.cols + 1) / 2;
    auto px = [&](std::size_t r, std::size_t c) {
        return plane(std::min(r, plane.rows - 1), std::min(c, plane.cols - 1));
    };

    WaveletPlanes out;
    out.source_rows = plane.rows;
    out.source_cols = plane.cols;
    out.approx = Plane(half_r, half_c);
    out.horizontal = Plane(half_r, half_c);
    out.vertical = Plane(half_r, half_c);
    out.diagonal = Plane(half_r, half_c);
    for (std::size_t i = 0; i < half_r; ++i) {
        for (std::size_t j = 0; j < half_c; ++j) {
            // Row butterflies on the two source rows, then column butterflies.
            const auto [low0, high0] = haar_pair(px(2 * i, 2 * j), px(2 * i, 2 * j + 1));
            const auto [low1, high1] = haar_pair(px(2 * i + 1, 2 * j), px(2 * i + 1, 2 * j + 1));
            const auto [ll, lh] = haar_pair(low0, low1);
            const auto [hl, hh] = haar_pair(high0, high1);
            out.approx(i, j) = ll;
            out.horizontal(i, j) = lh;
            out.vertical(i, j) = hl;
            out.diagonal(i, j) = hh;
        }
    }
    return out;
}

Plane haar_idwt2(const WaveletPlanes& planes) {
    const Plane& a = planes.approx;
    require(a.same_shape(planes.horizontal) && a.same_shape(planes.vertical) && a.same_shape(planes.diagonal),
            ErrorCode::dimension_mismatch, "wavelet bands differ in shape");
    std::size_t rows = planes.source_rows ? planes.source_rows : 2 * a.rows;
    std::size_t cols = planes.source_cols ? planes.source_cols : 2 * a.cols;
    require((rows + 1) / 2 == a.rows && (cols + 1) / 2 == a.cols, ErrorCode::dimension_mismatch,
            "wavelet bands do not match recorded source size");

    Plane out(rows, cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            // The Haar butterfly is its own inverse.
            const auto [low0, low1] = haar_pair(a(i, j), planes.horizontal(i, j));
            const auto [high0, high1] = haar_pair(planes.vertical(i, j), planes.diagonal(i, j));
            const auto [p00, p01] = haar_pair(low0, high0);
            const auto [p10, p11] = haar_pair(low1, high1);
            const std::size_t r0 = 2 * i, c0 = 2 * j;
            out(r0, c0) = p00;
            if (c0 + 1 < cols) out(r0, c0 + 1) = p01;
            if (r0 + 1 < rows) {
                out(r0 + 1, c0) = p10;
                if (c0 + 1 < cols) out(r0 + 1, c0 + 1) = p11;
            }
        }
    }
    return out;
}

}  // namespace augens::spectral
