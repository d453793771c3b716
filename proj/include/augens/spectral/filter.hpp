#pragma once

#include "augens/image.hpp"

namespace augens::spectral {

enum class KernelKind { disk, gaussian, log };

/// Odd, square, rotationally symmetric kernels.
///  - disk: equal weights on {x^2 + y^2 <= r^2}, sums to 1; support 2*ceil(r)+1.
///  - gaussian: sampled exp(-(x^2+y^2)/(2 sigma^2)), sums to 1; support 2*ceil(2 sigma)+1.
///  - log: Laplacian of Gaussian, shifted to sum to 0; support 2*ceil(3 sigma)+1 (at least 3).
Plane make_kernel(KernelKind kind, double param);

/// Convolution with output the size of `plane`; samples beyond the border
/// replicate the nearest edge pixel. Kernel dims must be odd.
Plane conv2_same(const Plane& plane, const Plane& kernel);

/// conv2_same applied to every channel.
Image conv2_same(const Image& img, const Plane& kernel);

Image gaussian_blur(const Image& img, double sigma);

}  // namespace augens::spectral
