#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "augens/augment/perturb.hpp"
#include "augens/augment/spec.hpp"
#include "augens/image.hpp"

namespace augens::augment {

// The per-APP entry points below take an already-derived stream seed; output
// k of a pipeline draws from Rng(derive_seed({seed, k})). apply_app derives
// that seed from (spec.seed, app id, sample key).

std::vector<Image> app1_reflect_scale(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app2_affine(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app3_affine_no_shear(const Image& img, const AppParams& params, std::uint64_t seed);

/// PCA jitter. Coefficients are the channel planes projected on `basis`;
/// without a basis one is fitted on the channel planes of the image and its
/// companions. Only the in-basis part of the image is perturbed, so a basis
/// with fewer components than pixels keeps the out-of-basis detail intact.
std::vector<Image> app4_pca(const Image& img, std::span<const Image> same_class, const AppParams& params,
                            std::uint64_t seed, const spectral::PcaBasis* basis = nullptr);

std::vector<Image> app5_dct(const Image& img, std::span<const Image> same_class, const AppParams& params,
                            std::uint64_t seed, bool protect_dc = true);
std::vector<Image> app6_contrast_sharpness_shift(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app7_color_jitter(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app8_color_normalization(const Image& img, const Image& target);
std::vector<Image> app9_elastic(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app10_dwt(const Image& img, std::span<const Image> same_class, const AppParams& params,
                             std::uint64_t seed);
std::vector<Image> app11_transform(const Image& img, std::span<const Image> same_class,
                                   const CoefficientTransform* backend, const AppParams& params,
                                   std::uint64_t seed);

/// Per-step record of how many coefficients were averaged (all channels).
struct DctMixTrace {
    std::vector<std::size_t> averaged;
    std::size_t elements_per_step = 0;
};

/// Cumulative DCT averaging with three same-class then two other-class
/// companions; the running image is emitted after every step.
std::vector<Image> app12_dct_mix(const Image& img, std::span<const Image> same_class,
                                 std::span<const Image> other_class, const AppParams& params, std::uint64_t seed,
                                 DctMixTrace* trace = nullptr);
std::vector<Image> app13_radon(const Image& img, const AppParams& params, std::uint64_t seed);
std::vector<Image> app14_spectral(const Image& img, const AppParams& params, std::uint64_t seed);

/// Runs one APP. `companions` holds same-class images first, then
/// other-class ones, in the counts given by spec.companions().
std::vector<Image> apply_app(const AugmentationSpec& spec, const Image& img, std::span<const Image> companions,
                             std::uint64_t sample_key);

/// Seed that apply_app hands to the per-APP function.
std::uint64_t app_stream_seed(const AugmentationSpec& spec, std::uint64_t sample_key);

/// Orthonormal DCT as a coefficient backend (one array per channel).
class DctTransform final : public CoefficientTransform {
public:
    std::string name() const override { return "dct"; }
    std::vector<Plane> forward(const Plane& channel) const override;
    Plane inverse(const std::vector<Plane>& arrays, std::size_t rows, std::size_t cols) const override;
};

/// Single-level Haar as a coefficient backend: arrays are cA, cH, cV, cD.
class HaarTransform final : public CoefficientTransform {
public:
    std::string name() const override { return "haar"; }
    std::vector<Plane> forward(const Plane& channel) const override;
    Plane inverse(const std::vector<Plane>& arrays, std::size_t rows, std::size_t cols) const override;
};

struct JitterOptions {
    double zero_p = 0.5;
    double swap_p = 0.05;
    bool protect_dc = false;
    NoiseRule noise = NoiseRule::coefficient_std();
};

/// Shared scheme behind APP5/10/11: per channel, forward transform, then one
/// output each for zero_p, add_noise and swap_p (with the five companions),
/// inverse transform, clamp.
std::vector<Image> coefficient_jitter(const Image& img, std::span<const Image> same_class,
                                      const CoefficientTransform& backend, const JitterOptions& options,
                                      std::uint64_t seed);

/// Resizes / re-channels a companion to match `reference`.
Image conform_to(const Image& companion, const Image& reference);

}  // namespace augens::augment
