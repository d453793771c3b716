#pragma once

#include <vector>

#include "augens/image.hpp"

namespace augens::spectral {

/// Parallel-beam projections. `projections(r, j)` is the line integral at
/// radial bin r for angle `angles[j]` (degrees). The source image size is kept
/// so back-projection lands on the original grid.
struct Sinogram {
    Plane projections;
    std::vector<double> angles;
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;

    std::size_t bins() const noexcept { return projections.rows; }
    std::size_t angle_count() const noexcept { return projections.cols; }
};

/// ceil(sqrt(rows^2 + cols^2)) + 3.
std::size_t radon_bins(std::size_t rows, std::size_t cols);

/// Rotate-and-sum with bilinear resampling on a 1-pixel lattice centred on the
/// image centre; samples outside the image contribute zero.
Sinogram radon(const Plane& plane, const std::vector<double>& angles_deg);

/// Ramp-filtered back-projection over the sinogram's own angles, onto a
/// `source_rows` x `source_cols` grid. The ramp is compensated for the
/// projector's linear interpolation and back-projection uses cubic taps.
Plane iradon(const Sinogram& sinogram);

/// Integer degrees 0..179.
std::vector<double> all_angles();

}  // namespace augens::spectral
