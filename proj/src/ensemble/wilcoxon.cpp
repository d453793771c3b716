#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "augens/ensemble/wilcoxon.hpp"
#include "augens/error.hpp"

namespace augens::ensemble {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, WilcoxonMode mode) {
    require(x.size() == y.size(), ErrorCode::dimension_mismatch, "Wilcoxon needs paired samples of equal length");
    require(!x.empty(), ErrorCode::invalid_argument, "Wilcoxon needs at least one pair");
    std::vector<double> d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        require(std::isfinite(diff), ErrorCode::invalid_argument, "Wilcoxon inputs must be finite");
        if (diff != 0.0) d.push_back(diff);
    }
    WilcoxonResult r;
    r.n_effective = d.size();
    if (d.empty()) return r;

    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

    // Doubled average ranks are integers; tie sizes feed the variance correction.
    std::vector<long long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
        for (std::size_t t = i; t < j; ++t) rank2[order[t]] = static_cast<long long>(i + 1 + j);
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    long long w2_plus = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0.0) w2_plus += rank2[i];
    }
    const double nn = static_cast<double>(n);
    const double total = nn * (nn + 1.0) / 2.0;
    r.w_plus = static_cast<double>(w2_plus) / 2.0;
    r.statistic = std::min(r.w_plus, total - r.w_plus);

    r.exact = mode == WilcoxonMode::exact || (mode == WilcoxonMode::automatic && n <= kWilcoxonExactMaxN);
    if (r.exact) {
        // Distribution of the doubled W+ over all 2^n sign assignments.
        const auto max_sum = static_cast<std::size_t>(std::accumulate(rank2.begin(), rank2.end(), 0LL));
        std::vector<double> count(max_sum + 1, 0.0);
        count[0] = 1.0;
        std::size_t reach = 0;
        for (long long rk : rank2) {
            const auto step = static_cast<std::size_t>(rk);
            for (std::size_t s = reach + 1; s-- > 0;) {
                if (count[s] != 0.0) count[s + step] += count[s];
            }
            reach += step;
        }
        const auto w = static_cast<std::size_t>(w2_plus);
        double lower = 0.0, upper = 0.0;
        for (std::size_t s = 0; s <= max_sum; ++s) {
            if (s <= w) lower += count[s];
            if (s >= w) upper += count[s];
        }
        const double all = std::ldexp(1.0, static_cast<int>(n));
        r.p_two_sided = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    } else {
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double z = std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
        r.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    r.p_two_sided = std::max(r.p_two_sided, std::numeric_limits<double>::min());
    return r;
}

}  // namespace augens::ensemble
