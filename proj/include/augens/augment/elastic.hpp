#pragma once

#include "augens/rng.hpp"
#include "augens/spectral/filter.hpp"
#include "augens/warp.hpp"

namespace augens::augment {

enum class ElasticMethod {
    perpixel,  // U(-1, 1) drawn independently at every pixel
    grid,      // U(-1, 1) on a coarse grid, bilinearly upsampled
};

struct DisplacementOptions {
    ElasticMethod method = ElasticMethod::perpixel;
    spectral::KernelKind filter = spectral::KernelKind::gaussian;
    double filter_param = 4.0;
    double amplitude_px = 15.0;
    std::size_t grid_size = 8;
};

/// Random field smoothed by the chosen kernel and scaled by `amplitude_px`.
/// The kernel is divided by its L1 norm first, so |field| <= amplitude_px for
/// every filter (sum-1 kernels are unchanged by this).
WarpField make_displacement_field(std::size_t height, std::size_t width, const DisplacementOptions& options,
                                  Rng& rng);

/// Sum of absolute differences between horizontally and vertically adjacent
/// samples.
double total_variation(const Plane& plane);

}  // namespace augens::augment
