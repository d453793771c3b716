#pragma once

#include "augens/image.hpp"

namespace augens {

/// Per-pixel displacement in pixels; `dx` is horizontal, `dy` vertical.
struct WarpField {
    Plane dx;
    Plane dy;

    WarpField() = default;
    WarpField(std::size_t height, std::size_t width) : dx(height, width), dy(height, width) {}

    std::size_t height() const noexcept { return dx.rows; }
    std::size_t width() const noexcept { return dx.cols; }
    double max_abs() const;
};

/// Bilinear sample at (x, y) with replicate border.
double sample_bilinear(const Plane& plane, double x, double y);
double sample_bilinear(const Image& img, double x, double y, std::size_t channel);

/// out(y, x) = img sampled at (x + dx, y + dy); out-of-range reads replicate the
/// nearest border pixel. A zero field reproduces the input bit for bit.
Image warp_bilinear(const Image& img, const WarpField& field);

/// Bilinear upsampling of a coarse grid onto `height` x `width` with the grid
/// corners pinned to the image corners.
Plane upsample_bilinear(const Plane& coarse, std::size_t height, std::size_t width);

}  // namespace augens
