#include "augens/warp.hpp"

#include <algorithm>
#include <cmath>

#include "augens/error.hpp"

namespace augens {

double WarpField::max_abs() const {
    double m = 0.0;
    for (double v : dx.values) m = std::max(m, std::abs(v));
    for (double v : dy.values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

struct Taps {
    std::size_t i0, i1;
    double f;
};

// Replicate border: coordinates are clamped into [0, n-1] before splitting.
Taps taps(double coord, std::size_t n) {
    const double maxc = static_cast<double>(n - 1);
    const double c = std::clamp(coord, 0.0, maxc);
    const double fl = std::floor(c);
    const auto i0 = static_cast<std::size_t>(fl);
    return {i0, std::min(i0 + 1, n - 1), c - fl};
}

template <typename Fetch>
double bilinear(Fetch fetch, std::size_t rows, std::size_t cols, double x, double y) {
    const Taps tx = taps(x, cols);
    const Taps ty = taps(y, rows);
    if (tx.f == 0.0 && ty.f == 0.0) return fetch(ty.i0, tx.i0);
    const double top = fetch(ty.i0, tx.i0) * (1.0 - tx.f) + fetch(ty.i0, tx.i1) * tx.f;
    const double bottom = fetch(ty.i1, tx.i0) * (1.0 - tx.f) + fetch(ty.i1, tx.i1) * tx.f;
    return top * (1.0 - ty.f) + bottom * ty.f;
}

}  // namespace

double sample_bilinear(const Plane& plane, double x, double y) {
    return bilinear([&](std::size_t r, std::size_t c) { return plane(r, c); }, plane.rows, plane.cols, x, y);
}

double sample_bilinear(const Image& img, double x, double y, std::size_t channel) {
    return bilinear([&](std::size_t r, std::size_t c) { return img.at(r, c, channel); }, img.height(),
                    img.width(), x, y);
}

Image warp_bilinear(const Image& img, const WarpField& field) {
    require(field.height() == img.height() && field.width() == img.width() &&
                field.dy.rows == img.height() && field.dy.cols == img.width(),
            ErrorCode::dimension_mismatch, "warp field does not match image size");
    Image out(img.height(), img.width(), img.channels());
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            const double sx = static_cast<double>(x) + field.dx(y, x);
            const double sy = static_cast<double>(y) + field.dy(y, x);
            for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) = sample_bilinear(img, sx, sy, c);
        }
    }
    return out;
}

Plane upsample_bilinear(const Plane& coarse, std::size_t height, std::size_t width) {
    require(!coarse.empty(), ErrorCode::invalid_argument, "empty grid");
    Plane out(height, width);
    const double sy = height > 1 ? static_cast<double>(coarse.rows - 1) / static_cast<double>(height - 1) : 0.0;
    const double sx = width > 1 ? static_cast<double>(coarse.cols - 1) / static_cast<double>(width - 1) : 0.0;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) out(y, x) = sample_bilinear(coarse, x * sx, y * sy);
    }
    return out;
}

}  // namespace augens
