#include "augens/augment/perturb.hpp"

#include <cmath>

#include "augens/error.hpp"

namespace augens::augment {

double stddev(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size()));
}

double stddev(const CoefficientSet& coeffs) {
    std::vector<double> all;
    for (const auto& p : coeffs) all.insert(all.end(), p.values.begin(), p.values.end());
    return stddev(all);
}

CoefficientSet perturb_coefficients(const CoefficientSet& coeffs, PerturbationMode mode,
                                    std::span<const CoefficientSet> companions, Rng& rng, bool protect_dc,
                                    NoiseRule noise, PerturbationStats* stats) {
    require(mode.p >= 0.0 && mode.p <= 1.0, ErrorCode::invalid_argument, "perturbation probability outside [0,1]");
    if (mode.kind == PerturbationMode::Kind::swap_p) {
        require(companions.size() == kSwapCompanions, ErrorCode::companion_count,
                "swap mode needs " + std::to_string(kSwapCompanions) + " companions, got " +
                    std::to_string(companions.size()));
        for (const auto& comp : companions) {
            require(comp.size() == coeffs.size(), ErrorCode::dimension_mismatch, "companion array count differs");
            for (std::size_t a = 0; a < coeffs.size(); ++a) {
                require(comp[a].same_shape(coeffs[a]), ErrorCode::dimension_mismatch, "companion array shape differs");
            }
        }
    }

    const double sigma = (mode.kind == PerturbationMode::Kind::add_noise && noise.kind == NoiseRule::Kind::coefficient_std)
                             ? stddev(coeffs)
                             : 0.0;
    PerturbationStats local;
    CoefficientSet out = coeffs;
    for (std::size_t a = 0; a < out.size(); ++a) {
        auto& values = out[a].values;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (protect_dc && a == 0 && i == 0) continue;
            ++local.total;
            switch (mode.kind) {
                case PerturbationMode::Kind::zero_p:
                    if (rng.bernoulli(mode.p)) {
                        values[i] = 0.0;
                        ++local.selected;
                    }
                    break;
                case PerturbationMode::Kind::add_noise:
                    if (noise.kind == NoiseRule::Kind::coefficient_std) {
                        values[i] += sigma * (rng.uniform() - 0.5);
                    } else {
                        values[i] += noise.base + noise.range * noise.unit * rng.uniform(-1.0, 1.0);
                    }
                    ++local.selected;
                    break;
                case PerturbationMode::Kind::swap_p:
                    if (rng.bernoulli(mode.p)) {
                        values[i] = companions[rng.index(kSwapCompanions)][a].values[i];
                        ++local.selected;
                    }
                    break;
            }
        }
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace augens::augment
