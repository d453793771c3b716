#pragma once

#include "augens/image.hpp"

namespace augens {

/// RGB -> HSV with all three channels in [0,1]; hue is wrapped into [0,1).
/// Achromatic pixels get hue 0.
Image rgb_to_hsv(const Image& img);
Image hsv_to_rgb(const Image& img);

/// Offset added to LMS responses before taking log10, so black stays finite.
inline constexpr double kLogEpsilon = 1.0 / 255.0;

/// Reinhard's decorrelated l-alpha-beta space: RGB -> LMS -> log10 -> PCA-like
/// rotation. The RGB->LMS rows are normalized so that white maps to (1,1,1),
/// which puts every gray level on the alpha = beta = 0 axis.
Image rgb_to_lalphabeta(const Image& img);
/// Inverse of rgb_to_lalphabeta; result clamped to [0,1].
Image lalphabeta_to_rgb(const Image& img);
/// Same as lalphabeta_to_rgb without the final clamp.
Image lalphabeta_to_rgb_unclamped(const Image& img);

}  // namespace augens
