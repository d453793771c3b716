#pragma once

#include <array>

#include "augens/image.hpp"

namespace augens::augment {

/// Linear map [low, high] -> [0, 1]; values below `low` go to 0, above
/// `high` to 1. Requires 0 <= low < high <= 1.
Image contrast_rescale(const Image& img, double low, double high);

/// img - gaussian_blur(img, sigma), unscaled (may be negative).
Image high_pass_residual(const Image& img, double sigma = 1.0);

/// high_pass_residual min-max rescaled to [0, 1] over all channels. A flat
/// residual (constant input) maps to all zeros.
Image sharpness_residual(const Image& img, double sigma = 1.0);

/// Adds shifts[c] / 255 to channel c, then clamps. 1-channel images use shifts[0].
Image color_shift(const Image& img, const std::array<int, 3>& shifts);

struct HsvJitter {
    double hue = 0.0;         // added to H, wrapped mod 1
    double saturation = 0.0;  // added to S
    double value = 0.0;       // added to V
    double contrast = 1.0;    // V' = (V - 0.5) * contrast + 0.5
};

/// Jitter in HSV space: S and V offsets, then contrast on V about 0.5, both
/// clamped to [0, 1]. Needs 3 channels.
Image hsv_jitter(const Image& img, const HsvJitter& jitter);

/// Unsharp masking: img + amount * (img - gaussian_blur(img, radius)), clamped.
Image unsharp_mask(const Image& img, double amount, double radius);

/// Per-channel rank mapping: the pixel of source rank r (ties broken by
/// position) receives the target value at quantile floor(r * Nt / Ns).
/// Output values are drawn from the target's values.
Image histogram_specification(const Image& img, const Image& target);

/// Per-channel mean/std matching in l-alpha-beta space. Works directly on
/// l-alpha-beta images; a zero-variance source channel is set to the target
/// mean.
Image reinhard_transfer_lab(const Image& source_lab, const Image& target_lab);

/// Reinhard color normalization of `img` towards `target`; result clamped.
Image reinhard_normalize(const Image& img, const Image& target);

}  // namespace augens::augment
