#include "augens/augment/elastic.hpp"

#include <cmath>

#include "augens/error.hpp"

namespace augens::augment {

namespace {

Plane raw_field(std::size_t height, std::size_t width, const DisplacementOptions& options, Rng& rng) {
    if (options.method == ElasticMethod::perpixel) {
        Plane p(height, width);
        for (double& v : p.values) v = rng.uniform(-1.0, 1.0);
        return p;
    }
    const std::size_t g = options.grid_size;
    Plane coarse(g, g);
    for (double& v : coarse.values) v = rng.uniform(-1.0, 1.0);
    return upsample_bilinear(coarse, height, width);
}

}  // namespace

WarpField make_displacement_field(std::size_t height, std::size_t width, const DisplacementOptions& options,
                                  Rng& rng) {
    require(options.amplitude_px >= 0.0, ErrorCode::invalid_argument, "amplitude must be non-negative");
    require(options.method != ElasticMethod::grid || options.grid_size >= 2, ErrorCode::invalid_argument,
            "grid size must be >= 2");
    Plane kernel = spectral::make_kernel(options.filter, options.filter_param);
    double l1 = 0.0;
    for (double v : kernel.values) l1 += std::abs(v);
    for (double& v : kernel.values) v /= l1;

    WarpField field;
    field.dx = spectral::conv2_same(raw_field(height, width, options, rng), kernel);
    field.dy = spectral::conv2_same(raw_field(height, width, options, rng), kernel);
    for (double& v : field.dx.values) v *= options.amplitude_px;
    for (double& v : field.dy.values) v *= options.amplitude_px;
    return field;
}

double total_variation(const Plane& plane) {
    double tv = 0.0;
    for (std::size_t r = 0; r < plane.rows; ++r) {
        for (std::size_t c = 0; c < plane.cols; ++c) {
            if (c + 1 < plane.cols) tv += std::abs(plane(r, c + 1) - plane(r, c));
            if (r + 1 < plane.rows) tv += std::abs(plane(r + 1, c) - plane(r, c));
        }
    }
    return tv;
}

}  // namespace augens::augment
