#include "augens/augment/geometric.hpp"

#include <cmath>
#include <numbers>

#include "augens/error.hpp"
#include "augens/warp.hpp"

namespace augens::augment {

void validate(const GeometricParams& p) {
    auto in = [](double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; };
    require(in(p.scale_x, 1.0, 2.0) && in(p.scale_y, 1.0, 2.0), ErrorCode::invalid_argument, "scale must lie in [1,2]");
    require(in(p.rotation_deg, -10.0, 10.0), ErrorCode::invalid_argument, "rotation must lie in [-10,10] degrees");
    require(in(p.translate_x, 0.0, 5.0) && in(p.translate_y, 0.0, 5.0), ErrorCode::invalid_argument,
            "translation must lie in [0,5] pixels");
    require(in(p.shear_x_deg, 0.0, 30.0) && in(p.shear_y_deg, 0.0, 30.0), ErrorCode::invalid_argument,
            "shear must lie in [0,30] degrees");
}

Image flip_lr(const Image& img) {
    Image out(img.height(), img.width(), img.channels());
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x)
            for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(y, img.width() - 1 - x, c);
    return out;
}

Image flip_tb(const Image& img) {
    Image out(img.height(), img.width(), img.channels());
    for (std::size_t y = 0; y < img.height(); ++y)
        for (std::size_t x = 0; x < img.width(); ++x)
            for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(img.height() - 1 - y, x, c);
    return out;
}

Image geometric_transform(const Image& img, const GeometricParams& params) {
    validate(params);
    Image out = img;
    if (params.reflect_lr) out = flip_lr(out);
    if (params.reflect_tb) out = flip_tb(out);
    if (params.is_reflection_only()) return out;

    constexpr double kDeg = std::numbers::pi / 180.0;
    const double cr = std::cos(params.rotation_deg * kDeg), sr = std::sin(params.rotation_deg * kDeg);
    const double kx = std::tan(params.shear_x_deg * kDeg), ky = std::tan(params.shear_y_deg * kDeg);
    // forward = [[1, kx], [ky, 1]] * [[cr, -sr], [sr, cr]] * diag(sx, sy)
    const double r00 = cr * params.scale_x, r01 = -sr * params.scale_y;
    const double r10 = sr * params.scale_x, r11 = cr * params.scale_y;
    const double a = r00 + kx * r10, b = r01 + kx * r11;
    const double c = ky * r00 + r10, d = ky * r01 + r11;
    const double det = a * d - b * c;
    require(std::abs(det) > 1e-12, ErrorCode::invalid_argument, "degenerate affine transform");
    const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;

    const double cx = (static_cast<double>(img.width()) - 1.0) / 2.0;
    const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;
    const Image src = out;
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            const double px = static_cast<double>(x) - cx - params.translate_x;
            const double py = static_cast<double>(y) - cy - params.translate_y;
            const double sx = cx + ia * px + ib * py;
            const double sy = cy + ic * px + id * py;
            for (std::size_t ch = 0; ch < img.channels(); ++ch) out.at(y, x, ch) = sample_bilinear(src, sx, sy, ch);
        }
    }
    return out;
}

}  // namespace augens::augment
