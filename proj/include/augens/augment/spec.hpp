#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "augens/image.hpp"
#include "augens/spectral/pca.hpp"

namespace augens::augment {

inline constexpr int kAppCount = 14;

/// New images produced per original, indexed by app id - 1.
inline constexpr std::size_t kOutputCounts[kAppCount] = {3, 6, 4, 3, 3, 3, 7, 2, 6, 3, 3, 5, 3, 2};

std::size_t output_count(int app_id);
/// Apps 6, 7 and 8 operate on color and refuse 1-channel input.
bool is_color_only(int app_id);
/// Apps whose augmentation perturbs a feature-space representation
/// (4, 5, 10, 11, 12, 13, 14).
bool is_feature_transform(int app_id);

struct CompanionPolicy {
    std::size_t same_class = 0;
    std::size_t other_class = 0;

    std::size_t total() const noexcept { return same_class + other_class; }
};

CompanionPolicy companion_policy(int app_id);

/// Invertible array transform for the coefficient-jitter scheme. A backend maps
/// one channel to any number of coefficient arrays and back.
class CoefficientTransform {
public:
    virtual ~CoefficientTransform() = default;
    virtual std::string name() const = 0;
    virtual std::vector<Plane> forward(const Plane& channel) const = 0;
    virtual Plane inverse(const std::vector<Plane>& arrays, std::size_t rows, std::size_t cols) const = 0;
};

/// Every tunable of the fourteen pipelines. Defaults reproduce the documented
/// ranges; names double as keys in the text form.
struct AppParams {
    // Geometric (1-3).
    double scale_min = 1.0;
    double scale_max = 2.0;
    double rotation_max_deg = 10.0;
    double translate_max_px = 5.0;
    double shear_max_deg = 30.0;

    // Coefficient jitter (4, 5, 10, 11).
    double zero_p = 0.5;
    double swap_p = 0.05;
    double dwt_offset_range = 0.5;
    /// The offset above is expressed in 8-bit intensity units; this converts it
    /// to the internal [0,1] range.
    double dwt_offset_unit = 1.0 / 255.0;
    std::size_t pca_components = 64;
    std::size_t pca_fit_cap = 256;

    // Contrast / sharpness / color shift (6, plus 7's last image).
    double contrast_low_min = 0.02;
    double contrast_low_max = 0.2;
    double contrast_high_min = 0.8;
    double contrast_high_max = 0.98;
    double sharpness_sigma = 1.0;
    double color_shift_max = 25.0;

    // HSV jitter, blur and unsharp masking (7).
    double hue_min = 0.05;
    double hue_max = 0.15;
    double saturation_min = -0.4;
    double saturation_max = -0.1;
    double value_min = -0.3;
    double value_max = -0.1;
    double contrast_min = 1.2;
    double contrast_max = 1.4;
    double blur_sigma_min = 1.0;
    double blur_sigma_max = 6.0;
    double unsharp_amount = 2.0;
    double unsharp_radius = 1.0;

    // Elastic deformation (9).
    double elastic_amplitude_px = 15.0;
    std::size_t elastic_grid = 8;
    double elastic_disk_radius = 5.0;
    double elastic_gaussian_sigma = 4.0;
    double elastic_log_sigma = 0.5;

    // DCT mixing (12).
    double mix_p = 0.2;

    // Radon (13).
    std::size_t radon_kept_angles = 160;
    std::size_t radon_zeroed_columns = 27;

    // Spectral masking (14).
    double fft_mask_p = 0.5;
    std::size_t dct_cutoff = 40;

    friend bool operator==(const AppParams&, const AppParams&) = default;
};

/// Fully describes one augmentation run. The backend and basis handles are
/// runtime attachments and are not part of the text form.
struct AugmentationSpec {
    int app_id = 1;
    AppParams params;
    std::uint64_t seed = 0;
    /// Number of independently trained replicates requested for this APP.
    std::size_t replicates = 1;

    std::shared_ptr<const CoefficientTransform> transform_backend;
    std::shared_ptr<const spectral::PcaBasis> pca_basis;

    CompanionPolicy companions() const { return companion_policy(app_id); }
};

/// Throws on an invalid app id or out-of-range parameter.
void validate(const AugmentationSpec& spec);

/// `key = value` lines; `from_key_values` accepts the same keys (plus `id`,
/// `seed`, `replicates`) and rejects unknown ones.
std::string to_text(const AugmentationSpec& spec);
AugmentationSpec from_key_values(const std::map<std::string, std::string>& kv);

}  // namespace augens::augment
