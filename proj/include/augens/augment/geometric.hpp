#pragma once

#include "augens/image.hpp"

namespace augens::augment {

struct GeometricParams {
    bool reflect_tb = false;
    bool reflect_lr = false;
    double scale_x = 1.0;       // [1, 2]
    double scale_y = 1.0;       // [1, 2]
    double rotation_deg = 0.0;  // [-10, 10]
    double translate_x = 0.0;   // [0, 5] px, positive moves content right
    double translate_y = 0.0;   // [0, 5] px, positive moves content down
    double shear_x_deg = 0.0;   // [0, 30]
    double shear_y_deg = 0.0;   // [0, 30]

    bool is_reflection_only() const noexcept {
        return scale_x == 1.0 && scale_y == 1.0 && rotation_deg == 0.0 && translate_x == 0.0 &&
               translate_y == 0.0 && shear_x_deg == 0.0 && shear_y_deg == 0.0;
    }
};

void validate(const GeometricParams& params);

/// Reflections (exact index flips) followed by the affine map
/// shear * rotation * scale about the image centre, then translation. The
/// affine part is resampled bilinearly with replicate border; output keeps the
/// input size.
Image geometric_transform(const Image& img, const GeometricParams& params);

Image flip_lr(const Image& img);
Image flip_tb(const Image& img);

}  // namespace augens::augment
