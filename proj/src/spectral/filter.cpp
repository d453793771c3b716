#include "augens/spectral/filter.hpp"

#include <algorithm>
#include <cmath>

#include "augens/error.hpp"

namespace augens::spectral {

Plane make_kernel(KernelKind kind, double param) {
    require(param > 0.0 && std::isfinite(param), ErrorCode::invalid_argument, "kernel parameter must be positive");
    std::size_t half = 0;
    switch (kind) {
        case KernelKind::disk: half = static_cast<std::size_t>(std::ceil(param)); break;
        case KernelKind::gaussian: half = static_cast<std::size_t>(std::ceil(2.0 * param)); break;
        case KernelKind::log: half = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(3.0 * param))); break;
    }
    const std::size_t size = 2 * half + 1;
    Plane k(size, size);
    const double h = static_cast<double>(half);
    double sum = 0.0;
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
            const double y = static_cast<double>(r) - h, x = static_cast<double>(c) - h;
            const double r2 = x * x + y * y;
            double v = 0.0;
            switch (kind) {
                case KernelKind::disk: v = r2 <= param * param ? 1.0 : 0.0; break;
                case KernelKind::gaussian:
                case KernelKind::log: v = std::exp(-r2 / (2.0 * param * param)); break;
            }
            k(r, c) = v;
            sum += v;
        }
    }
    for (double& v : k.values) v /= sum;
    if (kind == KernelKind::log) {
        const double s2 = param * param;
        double total = 0.0;
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t c = 0; c < size; ++c) {
                const double y = static_cast<double>(r) - h, x = static_cast<double>(c) - h;
                k(r, c) *= (x * x + y * y - 2.0 * s2) / (s2 * s2);
                total += k(r, c);
            }
        }
        const double shift = total / static_cast<double>(k.size());
        for (double& v : k.values) v -= shift;
    }
    return k;
}

Plane conv2_same(const Plane& plane, const Plane& kernel) {
    require(kernel.rows % 2 == 1 && kernel.cols % 2 == 1, ErrorCode::invalid_argument, "kernel dims must be odd");
    require(!plane.empty(), ErrorCode::invalid_argument, "empty plane");
    const long hr = static_cast<long>(kernel.rows / 2), hc = static_cast<long>(kernel.cols / 2);
    const long rows = static_cast<long>(plane.rows), cols = static_cast<long>(plane.cols);
    Plane out(plane.rows, plane.cols);
    for (long y = 0; y < rows; ++y) {
        for (long x = 0; x < cols; ++x) {
            double acc = 0.0;
            for (long i = -hr; i <= hr; ++i) {
                const long sy = std::clamp(y - i, 0L, rows - 1);
                for (long j = -hc; j <= hc; ++j) {
                    const long sx = std::clamp(x - j, 0L, cols - 1);
                    acc += kernel(static_cast<std::size_t>(i + hr), static_cast<std::size_t>(j + hc)) *
                           plane(static_cast<std::size_t>(sy), static_cast<std::size_t>(sx));
                }
            }
            out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = acc;
        }
    }
    return out;
}

Image conv2_same(const Image& img, const Plane& kernel) {
    Image out(img.height(), img.width(), img.channels());
    for (std::size_t c = 0; c < img.channels(); ++c) out.set_channel(c, conv2_same(img.channel(c), kernel));
    return out;
}

Image gaussian_blur(const Image& img, double sigma) {
    return conv2_same(img, make_kernel(KernelKind::gaussian, sigma));
}

}  // namespace augens::spectral
