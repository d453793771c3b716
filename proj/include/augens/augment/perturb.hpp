#pragma once

#include <span>
#include <vector>

#include "augens/image.hpp"
#include "augens/rng.hpp"

namespace augens::augment {

/// A set of coefficient arrays describing one channel in some transform
/// domain: one DCT plane, four Haar bands, a 1 x K PCA vector, ...
using CoefficientSet = std::vector<Plane>;

struct PerturbationMode {
    enum class Kind { zero_p, add_noise, swap_p };

    Kind kind = Kind::zero_p;
    double p = 0.5;

    static PerturbationMode zero(double p = 0.5) { return {Kind::zero_p, p}; }
    static PerturbationMode noise() { return {Kind::add_noise, 1.0}; }
    static PerturbationMode swap(double p = 0.05) { return {Kind::swap_p, p}; }
};

/// How add_noise builds each increment.
///  - coefficient_std: sigma(coeffs) * u, u ~ U(-0.5, 0.5), sigma over all
///    elements of the input set.
///  - offset: base + range * unit * u', u' ~ U(-1, 1); `base` is typically the
///    standard deviation of the source image.
struct NoiseRule {
    enum class Kind { coefficient_std, offset };

    Kind kind = Kind::coefficient_std;
    double base = 0.0;
    double range = 0.5;
    double unit = 1.0;

    static NoiseRule coefficient_std() { return {}; }
    static NoiseRule offset(double base, double range, double unit) { return {Kind::offset, base, range, unit}; }
};

struct PerturbationStats {
    std::size_t total = 0;      // elements eligible (DC excluded when protected)
    std::size_t selected = 0;   // elements zeroed / swapped / offset
};

/// Applies one perturbation mode to `coeffs`. Swap mode draws, per selected
/// element, one companion uniformly and copies its corresponding element;
/// it requires exactly five companion sets shaped like `coeffs`. With
/// `protect_dc`, element (0,0) of the first array is never touched and
/// consumes no randomness.
CoefficientSet perturb_coefficients(const CoefficientSet& coeffs, PerturbationMode mode,
                                    std::span<const CoefficientSet> companions, Rng& rng, bool protect_dc,
                                    NoiseRule noise = NoiseRule::coefficient_std(),
                                    PerturbationStats* stats = nullptr);

inline constexpr std::size_t kSwapCompanions = 5;

/// Population standard deviation over every element of the set.
double stddev(const CoefficientSet& coeffs);
double stddev(std::span<const double> values);

}  // namespace augens::augment
