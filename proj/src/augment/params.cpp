#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

#include "augens/augment/spec.hpp"
#include "augens/error.hpp"

namespace augens::augment {

std::size_t output_count(int app_id) {
    require(app_id >= 1 && app_id <= kAppCount, ErrorCode::unsupported, "unknown app id " + std::to_string(app_id));
    return kOutputCounts[app_id - 1];
}

bool is_color_only(int app_id) { return app_id >= 6 && app_id <= 8; }

bool is_feature_transform(int app_id) {
    return app_id == 4 || app_id == 5 || (app_id >= 10 && app_id <= 14);
}

CompanionPolicy companion_policy(int app_id) {
    switch (app_id) {
        case 4:
        case 5:
        case 10:
        case 11: return {5, 0};
        case 8: return {1, 0};
        case 12: return {3, 2};
        default: return {0, 0};
    }
}

namespace {

using Field = std::variant<double AppParams::*, std::size_t AppParams::*>;

struct NamedField {
    const char* name;
    Field field;
};

const std::vector<NamedField>& fields() {
    static const std::vector<NamedField> table = {
        {"scale_min", &AppParams::scale_min},
        {"scale_max", &AppParams::scale_max},
        {"rotation_max_deg", &AppParams::rotation_max_deg},
        {"translate_max_px", &AppParams::translate_max_px},
        {"shear_max_deg", &AppParams::shear_max_deg},
        {"zero_p", &AppParams::zero_p},
        {"swap_p", &AppParams::swap_p},
        {"dwt_offset_range", &AppParams::dwt_offset_range},
        {"dwt_offset_unit", &AppParams::dwt_offset_unit},
        {"pca_components", &AppParams::pca_components},
        {"pca_fit_cap", &AppParams::pca_fit_cap},
        {"contrast_low_min", &AppParams::contrast_low_min},
        {"contrast_low_max", &AppParams::contrast_low_max},
        {"contrast_high_min", &AppParams::contrast_high_min},
        {"contrast_high_max", &AppParams::contrast_high_max},
        {"sharpness_sigma", &AppParams::sharpness_sigma},
        {"color_shift_max", &AppParams::color_shift_max},
        {"hue_min", &AppParams::hue_min},
        {"hue_max", &AppParams::hue_max},
        {"saturation_min", &AppParams::saturation_min},
        {"saturation_max", &AppParams::saturation_max},
        {"value_min", &AppParams::value_min},
        {"value_max", &AppParams::value_max},
        {"contrast_min", &AppParams::contrast_min},
        {"contrast_max", &AppParams::contrast_max},
        {"blur_sigma_min", &AppParams::blur_sigma_min},
        {"blur_sigma_max", &AppParams::blur_sigma_max},
        {"unsharp_amount", &AppParams::unsharp_amount},
        {"unsharp_radius", &AppParams::unsharp_radius},
        {"elastic_amplitude_px", &AppParams::elastic_amplitude_px},
        {"elastic_grid", &AppParams::elastic_grid},
        {"elastic_disk_radius", &AppParams::elastic_disk_radius},
        {"elastic_gaussian_sigma", &AppParams::elastic_gaussian_sigma},
        {"elastic_log_sigma", &AppParams::elastic_log_sigma},
        {"mix_p", &AppParams::mix_p},
        {"radon_kept_angles", &AppParams::radon_kept_angles},
        {"radon_zeroed_columns", &AppParams::radon_zeroed_columns},
        {"fft_mask_p", &AppParams::fft_mask_p},
        {"dct_cutoff", &AppParams::dct_cutoff},
    };
    return table;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc() && end == text.data() + text.size() && std::isfinite(v), ErrorCode::parse,
            "bad number for " + key + ": '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc() && end == text.data() + text.size(), ErrorCode::parse,
            "bad integer for " + key + ": '" + text + "'");
    return v;
}

void check_prob(double p, const char* name) {
    require(p >= 0.0 && p <= 1.0, ErrorCode::invalid_argument, std::string(name) + " must lie in [0,1]");
}

void check_order(double lo, double hi, const char* name) {
    require(lo <= hi, ErrorCode::invalid_argument, std::string(name) + " range is inverted");
}

}  // namespace

void validate(const AugmentationSpec& spec) {
    require(spec.app_id >= 1 && spec.app_id <= kAppCount, ErrorCode::unsupported,
            "unknown app id " + std::to_string(spec.app_id));
    require(spec.replicates >= 1, ErrorCode::invalid_argument, "replicates must be >= 1");
    const AppParams& p = spec.params;
    require(p.scale_min >= 1.0 && p.scale_max <= 2.0, ErrorCode::invalid_argument, "scale range must lie in [1,2]");
    check_order(p.scale_min, p.scale_max, "scale");
    require(p.rotation_max_deg >= 0.0 && p.rotation_max_deg <= 10.0, ErrorCode::invalid_argument,
            "rotation_max_deg must lie in [0,10]");
    require(p.translate_max_px >= 0.0 && p.translate_max_px <= 5.0, ErrorCode::invalid_argument,
            "translate_max_px must lie in [0,5]");
    require(p.shear_max_deg >= 0.0 && p.shear_max_deg <= 30.0, ErrorCode::invalid_argument,
            "shear_max_deg must lie in [0,30]");
    check_prob(p.zero_p, "zero_p");
    check_prob(p.swap_p, "swap_p");
    check_prob(p.mix_p, "mix_p");
    check_prob(p.fft_mask_p, "fft_mask_p");
    require(p.dwt_offset_range >= 0.0 && p.dwt_offset_unit >= 0.0, ErrorCode::invalid_argument,
            "dwt offset must be non-negative");
    require(p.pca_components >= 1 && p.pca_fit_cap >= 2, ErrorCode::invalid_argument, "bad PCA settings");
    require(p.contrast_low_min >= 0.0 && p.contrast_high_max <= 1.0 && p.contrast_low_max < p.contrast_high_min,
            ErrorCode::invalid_argument, "contrast bounds must satisfy 0 <= a < b <= 1");
    check_order(p.contrast_low_min, p.contrast_low_max, "contrast_low");
    check_order(p.contrast_high_min, p.contrast_high_max, "contrast_high");
    require(p.sharpness_sigma > 0.0 && p.unsharp_radius > 0.0, ErrorCode::invalid_argument, "sigma must be positive");
    require(p.color_shift_max >= 0.0 && p.color_shift_max <= 255.0, ErrorCode::invalid_argument,
            "color_shift_max must lie in [0,255]");
    check_order(p.hue_min, p.hue_max, "hue");
    check_order(p.saturation_min, p.saturation_max, "saturation");
    check_order(p.value_min, p.value_max, "value");
    check_order(p.contrast_min, p.contrast_max, "contrast");
    require(p.blur_sigma_min > 0.0, ErrorCode::invalid_argument, "blur sigma must be positive");
    check_order(p.blur_sigma_min, p.blur_sigma_max, "blur_sigma");
    require(p.elastic_amplitude_px >= 0.0 && p.elastic_grid >= 2 && p.elastic_disk_radius > 0.0 &&
                p.elastic_gaussian_sigma > 0.0 && p.elastic_log_sigma > 0.0,
            ErrorCode::invalid_argument, "bad elastic settings");
    require(p.radon_kept_angles >= 1 && p.radon_kept_angles <= 180, ErrorCode::invalid_argument,
            "radon_kept_angles must lie in [1,180]");
    require(p.radon_zeroed_columns <= p.radon_kept_angles, ErrorCode::invalid_argument,
            "radon_zeroed_columns cannot exceed radon_kept_angles");
}

std::string to_text(const AugmentationSpec& spec) {
    std::ostringstream os;
    os << "id = " << spec.app_id << "\n";
    os << "seed = " << spec.seed << "\n";
    os << "replicates = " << spec.replicates << "\n";
    for (const auto& f : fields()) {
        os << f.name << " = ";
        std::visit(
            [&](auto member) {
                const auto value = spec.params.*member;
                if constexpr (std::is_same_v<std::decay_t<decltype(value)>, double>) {
                    os << format_double(value);
                } else {
                    os << value;
                }
            },
            f.field);
        os << "\n";
    }
    return os.str();
}

AugmentationSpec from_key_values(const std::map<std::string, std::string>& kv) {
    AugmentationSpec spec;
    for (const auto& [key, value] : kv) {
        if (key == "id") {
            spec.app_id = static_cast<int>(parse_u64(key, value));
            continue;
        }
        if (key == "seed") {
            spec.seed = parse_u64(key, value);
            continue;
        }
        if (key == "replicates") {
            spec.replicates = static_cast<std::size_t>(parse_u64(key, value));
            continue;
        }
        bool found = false;
        for (const auto& f : fields()) {
            if (key != f.name) continue;
            found = true;
            std::visit(
                [&](auto member) {
                    using T = std::decay_t<decltype(spec.params.*member)>;
                    if constexpr (std::is_same_v<T, double>) {
                        spec.params.*member = parse_double(key, value);
                    } else {
                        spec.params.*member = static_cast<T>(parse_u64(key, value));
                    }
                },
                f.field);
        }
        require(found, ErrorCode::parse, "unknown augmentation key '" + key + "'");
    }
    validate(spec);
    return spec;
}

}  // namespace augens::augment
