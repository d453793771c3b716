#pragma once

#include <cstddef>
#include <span>

namespace augens::ensemble {

enum class WilcoxonMode { automatic, exact, normal };

inline constexpr std::size_t kWilcoxonExactMaxN = 12;

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double w_plus = 0.0;
    double p_two_sided = 1.0;
    std::size_t n_effective = 0;  // pairs with a nonzero difference
    bool exact = true;
};

/// Paired signed-rank test on x - y. Zero differences are dropped and tied
/// magnitudes share their average rank. `automatic` is exact up to
/// kWilcoxonExactMaxN nonzero pairs and uses the tie- and continuity-corrected
/// normal approximation beyond. No nonzero difference gives p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    WilcoxonMode mode = WilcoxonMode::automatic);

}  // namespace augens::ensemble
