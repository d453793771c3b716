#include "augens/augment/apps.hpp"

#include <algorithm>
#include <cmath>

#include "augens/augment/elastic.hpp"
#include "augens/augment/geometric.hpp"
#include "augens/augment/photometric.hpp"
#include "augens/error.hpp"
#include "augens/rng.hpp"
#include "augens/spectral/filter.hpp"
#include "augens/spectral/radon.hpp"
#include "augens/spectral/transforms.hpp"
#include "augens/spectral/wavelet.hpp"

namespace augens::augment {

namespace {

Rng stream(std::uint64_t seed, std::uint64_t output) { return Rng(derive_seed({seed, output})); }

void require_companions(std::span<const Image> companions, std::size_t expected, const char* what) {
    require(companions.size() == expected, ErrorCode::companion_count,
            std::string(what) + " needs " + std::to_string(expected) + " companions, got " +
                std::to_string(companions.size()));
}

std::vector<Image> conform_all(std::span<const Image> companions, const Image& reference) {
    std::vector<Image> out;
    out.reserve(companions.size());
    for (const auto& c : companions) out.push_back(conform_to(c, reference));
    return out;
}

GeometricParams draw_scale(const AppParams& p, Rng& rng) {
    GeometricParams g;
    g.scale_x = rng.uniform(p.scale_min, p.scale_max);
    g.scale_y = rng.uniform(p.scale_min, p.scale_max);
    return g;
}

GeometricParams draw_rotation(const AppParams& p, Rng& rng) {
    GeometricParams g;
    g.rotation_deg = rng.uniform(-p.rotation_max_deg, p.rotation_max_deg);
    return g;
}

GeometricParams draw_translation(const AppParams& p, Rng& rng) {
    GeometricParams g;
    g.translate_x = rng.uniform(0.0, p.translate_max_px);
    g.translate_y = rng.uniform(0.0, p.translate_max_px);
    return g;
}

GeometricParams draw_shear(const AppParams& p, Rng& rng) {
    GeometricParams g;
    g.shear_x_deg = rng.uniform(0.0, p.shear_max_deg);
    g.shear_y_deg = rng.uniform(0.0, p.shear_max_deg);
    return g;
}

std::array<int, 3> draw_color_shift(const AppParams& p, Rng& rng) {
    const auto m = static_cast<long long>(std::floor(p.color_shift_max));
    return {static_cast<int>(rng.integer(-m, m)), static_cast<int>(rng.integer(-m, m)),
            static_cast<int>(rng.integer(-m, m))};
}

std::vector<Plane> channels_of(const Image& img) {
    std::vector<Plane> planes;
    for (std::size_t c = 0; c < img.channels(); ++c) planes.push_back(img.channel(c));
    return planes;
}

double image_stddev(const Image& img) { return stddev(img.data()); }

}  // namespace

Image conform_to(const Image& companion, const Image& reference) {
    Image out = companion;
    if (out.channels() != reference.channels()) {
        out = reference.channels() == 1 ? to_grayscale(out) : gray_to_rgb(out);
    }
    if (out.height() != reference.height() || out.width() != reference.width()) {
        out = resize_area(out, reference.height(), reference.width());
    }
    return out;
}

// --- geometric ---

std::vector<Image> app1_reflect_scale(const Image& img, const AppParams& params, std::uint64_t seed) {
    GeometricParams tb;
    tb.reflect_tb = true;
    GeometricParams lr;
    lr.reflect_lr = true;
    Rng rng = stream(seed, 2);
    return {geometric_transform(img, tb), geometric_transform(img, lr), geometric_transform(img, draw_scale(params, rng))};
}

std::vector<Image> app2_affine(const Image& img, const AppParams& params, std::uint64_t seed) {
    std::vector<Image> out = app1_reflect_scale(img, params, seed);
    Rng rot = stream(seed, 3), shift = stream(seed, 4), shear = stream(seed, 5);
    out.push_back(geometric_transform(img, draw_rotation(params, rot)));
    out.push_back(geometric_transform(img, draw_translation(params, shift)));
    out.push_back(geometric_transform(img, draw_shear(params, shear)));
    return out;
}

std::vector<Image> app3_affine_no_shear(const Image& img, const AppParams& params, std::uint64_t seed) {
    GeometricParams tb;
    tb.reflect_tb = true;
    GeometricParams lr;
    lr.reflect_lr = true;
    Rng rot = stream(seed, 2), shift = stream(seed, 3);
    return {geometric_transform(img, tb), geometric_transform(img, lr),
            geometric_transform(img, draw_rotation(params, rot)),
            geometric_transform(img, draw_translation(params, shift))};
}

// --- coefficient jitter ---

std::vector<Plane> DctTransform::forward(const Plane& channel) const { return {spectral::dct2(channel)}; }

Plane DctTransform::inverse(const std::vector<Plane>& arrays, std::size_t, std::size_t) const {
    require(arrays.size() == 1, ErrorCode::dimension_mismatch, "DCT backend expects one array");
    return spectral::idct2(arrays[0]);
}

std::vector<Plane> HaarTransform::forward(const Plane& channel) const {
    auto w = spectral::haar_dwt2(channel);
    return {std::move(w.approx), std::move(w.horizontal), std::move(w.vertical), std::move(w.diagonal)};
}

Plane HaarTransform::inverse(const std::vector<Plane>& arrays, std::size_t rows, std::size_t cols) const {
    require(arrays.size() == 4, ErrorCode::dimension_mismatch, "Haar backend expects four arrays");
    spectral::WaveletPlanes w{arrays[0], arrays[1], arrays[2], arrays[3], rows, cols};
    return spectral::haar_idwt2(w);
}

std::vector<Image> coefficient_jitter(const Image& img, std::span<const Image> same_class,
                                      const CoefficientTransform& backend, const JitterOptions& options,
                                      std::uint64_t seed) {
    require_companions(same_class, kSwapCompanions, "coefficient jitter");
    const std::vector<Image> companions = conform_all(same_class, img);
    const std::size_t rows = img.height(), cols = img.width();

    std::vector<CoefficientSet> original(img.channels());
    std::vector<std::vector<CoefficientSet>> others(img.channels());
    for (std::size_t c = 0; c < img.channels(); ++c) {
        original[c] = backend.forward(img.channel(c));
        for (const auto& comp : companions) others[c].push_back(backend.forward(comp.channel(c)));
    }

    const PerturbationMode modes[3] = {PerturbationMode::zero(options.zero_p), PerturbationMode::noise(),
                                       PerturbationMode::swap(options.swap_p)};
    std::vector<Image> out;
    for (std::size_t k = 0; k < 3; ++k) {
        Rng rng = stream(seed, k);
        std::vector<Plane> planes;
        for (std::size_t c = 0; c < img.channels(); ++c) {
            const CoefficientSet perturbed =
                perturb_coefficients(original[c], modes[k], others[c], rng, options.protect_dc, options.noise);
            planes.push_back(backend.inverse(perturbed, rows, cols));
        }
        out.push_back(clamp01(Image::from_planes(planes)));
    }
    return out;
}

std::vector<Image> app4_pca(const Image& img, std::span<const Image> same_class, const AppParams& params,
                            std::uint64_t seed, const spectral::PcaBasis* basis) {
    require_companions(same_class, kSwapCompanions, "APP4");
    const std::vector<Image> companions = conform_all(same_class, img);
    const std::size_t dim = img.pixel_count();

    spectral::PcaBasis local;
    if (basis == nullptr) {
        const std::size_t rows = img.channels() * (1 + companions.size());
        Plane data(rows, dim);
        std::size_t r = 0;
        auto add = [&](const Image& im) {
            for (std::size_t c = 0; c < im.channels(); ++c) {
                const Plane ch = im.channel(c);
                std::copy(ch.values.begin(), ch.values.end(), data.values.begin() + r * dim);
                ++r;
            }
        };
        add(img);
        for (const auto& comp : companions) add(comp);
        local = spectral::pca_fit(data, std::min({params.pca_components, rows - 1, dim}));
        basis = &local;
    }
    require(basis->dim == dim, ErrorCode::dimension_mismatch, "PCA basis does not match image size");

    auto project = [&](const Image& im, std::size_t c) {
        const auto coeffs = spectral::pca_project(*basis, im.channel(c).values);
        Plane p(1, coeffs.size());
        p.values = coeffs;
        return CoefficientSet{p};
    };
    std::vector<CoefficientSet> original(img.channels());
    std::vector<std::vector<CoefficientSet>> others(img.channels());
    for (std::size_t c = 0; c < img.channels(); ++c) {
        original[c] = project(img, c);
        for (const auto& comp : companions) others[c].push_back(project(comp, c));
    }

    const PerturbationMode modes[3] = {PerturbationMode::zero(params.zero_p), PerturbationMode::noise(),
                                       PerturbationMode::swap(params.swap_p)};
    std::vector<Image> out;
    for (std::size_t k = 0; k < 3; ++k) {
        Rng rng = stream(seed, k);
        Image result = img;
        for (std::size_t c = 0; c < img.channels(); ++c) {
            const CoefficientSet perturbed = perturb_coefficients(original[c], modes[k], others[c], rng, false);
            Plane channel = img.channel(c);
            for (std::size_t j = 0; j < basis->count; ++j) {
                const double delta = perturbed[0].values[j] - original[c][0].values[j];
                if (delta == 0.0) continue;
                const auto comp = basis->component(j);
                for (std::size_t i = 0; i < dim; ++i) channel.values[i] += delta * comp[i];
            }
            result.set_channel(c, channel);
        }
        out.push_back(clamp01(result));
    }
    return out;
}

std::vector<Image> app5_dct(const Image& img, std::span<const Image> same_class, const AppParams& params,
                            std::uint64_t seed, bool protect_dc) {
    JitterOptions options;
    options.zero_p = params.zero_p;
    options.swap_p = params.swap_p;
    options.protect_dc = protect_dc;
    options.noise = NoiseRule::coefficient_std();
    return coefficient_jitter(img, same_class, DctTransform{}, options, seed);
}

namespace {

JitterOptions dwt_style_options(const Image& img, const AppParams& params) {
    JitterOptions options;
    options.zero_p = params.zero_p;
    options.swap_p = params.swap_p;
    options.protect_dc = false;
    options.noise = NoiseRule::offset(image_stddev(img), params.dwt_offset_range, params.dwt_offset_unit);
    return options;
}

}  // namespace

std::vector<Image> app10_dwt(const Image& img, std::span<const Image> same_class, const AppParams& params,
                             std::uint64_t seed) {
    return coefficient_jitter(img, same_class, HaarTransform{}, dwt_style_options(img, params), seed);
}

std::vector<Image> app11_transform(const Image& img, std::span<const Image> same_class,
                                   const CoefficientTransform* backend, const AppParams& params,
                                   std::uint64_t seed) {
    require(backend != nullptr, ErrorCode::unsupported, "APP11 needs a plugged transform backend (none supplied)");
    return coefficient_jitter(img, same_class, *backend, dwt_style_options(img, params), seed);
}

// --- color / intensity ---

std::vector<Image> app6_contrast_sharpness_shift(const Image& img, const AppParams& params, std::uint64_t seed) {
    require(img.channels() == 3, ErrorCode::color_only, "APP6 works on color images only");
    Rng contrast = stream(seed, 0), shift = stream(seed, 2);
    const double low = contrast.uniform(params.contrast_low_min, params.contrast_low_max);
    const double high = contrast.uniform(params.contrast_high_min, params.contrast_high_max);
    return {contrast_rescale(img, low, high), sharpness_residual(img, params.sharpness_sigma),
            color_shift(img, draw_color_shift(params, shift))};
}

std::vector<Image> app7_color_jitter(const Image& img, const AppParams& params, std::uint64_t seed) {
    require(img.channels() == 3, ErrorCode::color_only, "APP7 works on color images only");
    std::vector<Image> out;
    for (std::size_t k = 0; k < 4; ++k) {
        Rng rng = stream(seed, k);
        HsvJitter j;
        j.hue = rng.uniform(params.hue_min, params.hue_max);
        j.saturation = rng.uniform(params.saturation_min, params.saturation_max);
        j.value = rng.uniform(params.value_min, params.value_max);
        j.contrast = rng.uniform(params.contrast_min, params.contrast_max);
        out.push_back(hsv_jitter(img, j));
    }
    Rng blur = stream(seed, 4), shift = stream(seed, 6);
    out.push_back(clamp01(spectral::gaussian_blur(img, blur.uniform(params.blur_sigma_min, params.blur_sigma_max))));
    out.push_back(unsharp_mask(img, params.unsharp_amount, params.unsharp_radius));
    out.push_back(color_shift(img, draw_color_shift(params, shift)));
    return out;
}

std::vector<Image> app8_color_normalization(const Image& img, const Image& target) {
    require(img.channels() == 3, ErrorCode::color_only, "APP8 works on color images only");
    const Image t = conform_to(target, img);
    return {histogram_specification(img, t), reinhard_normalize(img, t)};
}

// --- elastic ---

std::vector<Image> app9_elastic(const Image& img, const AppParams& params, std::uint64_t seed) {
    const ElasticMethod methods[2] = {ElasticMethod::perpixel, ElasticMethod::grid};
    const std::pair<spectral::KernelKind, double> filters[3] = {
        {spectral::KernelKind::disk, params.elastic_disk_radius},
        {spectral::KernelKind::gaussian, params.elastic_gaussian_sigma},
        {spectral::KernelKind::log, params.elastic_log_sigma},
    };
    std::vector<Image> out;
    std::size_t k = 0;
    for (auto method : methods) {
        for (const auto& [kind, param] : filters) {
            Rng rng = stream(seed, k++);
            DisplacementOptions opt;
            opt.method = method;
            opt.filter = kind;
            opt.filter_param = param;
            opt.amplitude_px = params.elastic_amplitude_px;
            opt.grid_size = params.elastic_grid;
            out.push_back(warp_bilinear(img, make_displacement_field(img.height(), img.width(), opt, rng)));
        }
    }
    return out;
}

// --- novel feature-transform pipelines ---

std::vector<Image> app12_dct_mix(const Image& img, std::span<const Image> same_class,
                                 std::span<const Image> other_class, const AppParams& params, std::uint64_t seed,
                                 DctMixTrace* trace) {
    require(same_class.size() == 3 && other_class.size() == 2, ErrorCode::companion_count,
            "APP12 needs 3 same-class and 2 other-class companions, got " + std::to_string(same_class.size()) +
                " and " + std::to_string(other_class.size()));
    std::vector<Image> companions = conform_all(same_class, img);
    for (const auto& o : other_class) companions.push_back(conform_to(o, img));

    std::vector<Plane> running;
    for (const auto& ch : channels_of(img)) running.push_back(spectral::dct2(ch));

    if (trace) {
        trace->averaged.clear();
        trace->elements_per_step = img.data().size();
    }
    Rng rng = stream(seed, 0);
    std::vector<Image> out;
    for (const auto& comp : companions) {
        std::size_t averaged = 0;
        std::vector<Plane> planes;
        for (std::size_t c = 0; c < img.channels(); ++c) {
            const Plane incoming = spectral::dct2(comp.channel(c));
            Plane& acc = running[c];
            for (std::size_t i = 0; i < acc.size(); ++i) {
                if (rng.bernoulli(params.mix_p)) {
                    acc.values[i] = (acc.values[i] + incoming.values[i]) / 2.0;
                    ++averaged;
                }
            }
            planes.push_back(spectral::idct2(acc));
        }
        if (trace) trace->averaged.push_back(averaged);
        out.push_back(clamp01(Image::from_planes(planes)));
    }
    return out;
}

namespace {

std::vector<double> random_angles(Rng& rng, std::size_t count) {
    auto picks = rng.sample_without_replacement(180, count);
    std::sort(picks.begin(), picks.end());
    return std::vector<double>(picks.begin(), picks.end());
}

Image radon_roundtrip(const Image& img, const std::vector<double>& angles, const std::vector<std::size_t>& zeroed) {
    std::vector<Plane> planes;
    for (std::size_t c = 0; c < img.channels(); ++c) {
        spectral::Sinogram sino = spectral::radon(img.channel(c), angles);
        for (std::size_t col : zeroed) {
            for (std::size_t r = 0; r < sino.bins(); ++r) sino.projections(r, col) = 0.0;
        }
        planes.push_back(spectral::iradon(sino));
    }
    return clamp01(Image::from_planes(planes));
}

}  // namespace

std::vector<Image> app13_radon(const Image& img, const AppParams& params, std::uint64_t seed) {
    const std::size_t kept = params.radon_kept_angles;
    const std::size_t zeroed = params.radon_zeroed_columns;
    std::vector<Image> out;

    Rng first = stream(seed, 0);
    out.push_back(radon_roundtrip(img, random_angles(first, kept), {}));

    Rng second = stream(seed, 1);
    out.push_back(radon_roundtrip(img, spectral::all_angles(), second.sample_without_replacement(180, zeroed)));

    Rng third = stream(seed, 2);
    const auto angles = random_angles(third, kept);
    out.push_back(radon_roundtrip(img, angles, third.sample_without_replacement(kept, zeroed)));
    return out;
}

std::vector<Image> app14_spectral(const Image& img, const AppParams& params, std::uint64_t seed) {
    const std::size_t rows = img.height(), cols = img.width();
    Rng rng = stream(seed, 0);
    std::vector<Plane> masked;
    std::vector<char> zero(rows * cols);
    for (std::size_t c = 0; c < img.channels(); ++c) {
        ComplexPlane spectrum = spectral::fft2(img.channel(c));
        // Bin (u, v) shares its decision with its conjugate partner so the
        // inverse stays real.
        for (std::size_t u = 0; u < rows; ++u) {
            for (std::size_t v = 0; v < cols; ++v) {
                const std::size_t idx = u * cols + v;
                const std::size_t partner = ((rows - u) % rows) * cols + (cols - v) % cols;
                zero[idx] = partner < idx ? zero[partner] : static_cast<char>(rng.bernoulli(params.fft_mask_p));
                if (zero[idx]) spectrum.values[idx] = 0.0;
            }
        }
        masked.push_back(spectral::ifft2_real(spectrum));
    }

    std::vector<Plane> lowpass;
    const std::size_t cut = params.dct_cutoff;
    for (std::size_t c = 0; c < img.channels(); ++c) {
        Plane coeffs = spectral::dct2(img.channel(c));
        for (std::size_t r = cut; r < rows; ++r)
            for (std::size_t q = cut; q < cols; ++q) coeffs(r, q) = 0.0;
        lowpass.push_back(spectral::idct2(coeffs));
    }
    return {clamp01(Image::from_planes(masked)), clamp01(Image::from_planes(lowpass))};
}

// --- dispatch ---

std::uint64_t app_stream_seed(const AugmentationSpec& spec, std::uint64_t sample_key) {
    return derive_seed({spec.seed, static_cast<std::uint64_t>(spec.app_id), sample_key});
}

std::vector<Image> apply_app(const AugmentationSpec& spec, const Image& img, std::span<const Image> companions,
                             std::uint64_t sample_key) {
    validate(spec);
    validate_image(img);
    if (is_color_only(spec.app_id) && img.channels() == 1) {
        fail(ErrorCode::color_only, "APP" + std::to_string(spec.app_id) + " is color-only; got a 1-channel image");
    }
    const CompanionPolicy policy = spec.companions();
    require(companions.size() == policy.total(), ErrorCode::companion_count,
            "APP" + std::to_string(spec.app_id) + " needs " + std::to_string(policy.same_class) + " same-class and " +
                std::to_string(policy.other_class) + " other-class companions, got " +
                std::to_string(companions.size()));
    for (const auto& c : companions) validate_image(c);

    const std::uint64_t seed = app_stream_seed(spec, sample_key);
    const AppParams& p = spec.params;
    std::vector<Image> out;
    switch (spec.app_id) {
        case 1: out = app1_reflect_scale(img, p, seed); break;
        case 2: out = app2_affine(img, p, seed); break;
        case 3: out = app3_affine_no_shear(img, p, seed); break;
        case 4: out = app4_pca(img, companions, p, seed, spec.pca_basis.get()); break;
        case 5: out = app5_dct(img, companions, p, seed); break;
        case 6: out = app6_contrast_sharpness_shift(img, p, seed); break;
        case 7: out = app7_color_jitter(img, p, seed); break;
        case 8: out = app8_color_normalization(img, companions[0]); break;
        case 9: out = app9_elastic(img, p, seed); break;
        case 10: out = app10_dwt(img, companions, p, seed); break;
        case 11: out = app11_transform(img, companions, spec.transform_backend.get(), p, seed); break;
        case 12: out = app12_dct_mix(img, companions.subspan(0, 3), companions.subspan(3, 2), p, seed); break;
        case 13: out = app13_radon(img, p, seed); break;
        case 14: out = app14_spectral(img, p, seed); break;
        default: fail(ErrorCode::unsupported, "unknown app id " + std::to_string(spec.app_id));
    }
    require(out.size() == output_count(spec.app_id), ErrorCode::invalid_argument, "pipeline produced wrong count");
    return out;
}

}  // namespace augens::augment
