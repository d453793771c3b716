#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "augens/ensemble/metrics.hpp"
#include "augens/error.hpp"

namespace augens::ensemble {

double auc_binary(std::span<const double> pos, std::span<const double> neg) {
    require(!pos.empty() && !neg.empty(), ErrorCode::invalid_argument, "AUC needs positive and negative scores");
    struct Entry {
        double value;
        bool positive;
    };
    std::vector<Entry> all;
    all.reserve(pos.size() + neg.size());
    for (double v : pos) all.push_back({v, true});
    for (double v : neg) all.push_back({v, false});
    for (const auto& e : all) {
        require(!std::isnan(e.value), ErrorCode::invalid_argument, "AUC scores must not be NaN");
    }
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });

    // A tie block covering 1-based ranks i+1..j has average rank (i+1+j)/2;
    // doubled, that is the integer i+1+j.
    std::int64_t doubled_rank_sum = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        const auto doubled = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            if (all[t].positive) doubled_rank_sum += doubled;
        }
        i = j;
    }
    const auto np = static_cast<std::int64_t>(pos.size());
    const auto nn = static_cast<std::int64_t>(neg.size());
    const std::int64_t doubled_u = doubled_rank_sum - np * (np + 1);
    return static_cast<double>(doubled_u) / static_cast<double>(2 * np * nn);
}

MetricReport euc_multiclass(const ScoreMatrix& m, std::span<const int> labels) {
    validate(m);
    require(labels.size() == m.rows(), ErrorCode::dimension_mismatch, "label count differs from score rows");
    MetricReport report;
    report.accuracy = accuracy(m, labels);
    for (std::size_t k = 0; k < m.classes; ++k) {
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            (labels[i] == static_cast<int>(k) ? pos : neg).push_back(m.at(i, k));
        }
        require(!pos.empty() && !neg.empty(), ErrorCode::invalid_argument,
                "class " + std::to_string(k) + " needs both positive and negative samples for AUC");
        report.per_class_auc.push_back(auc_binary(pos, neg));
    }
    const double mean = std::accumulate(report.per_class_auc.begin(), report.per_class_auc.end(), 0.0) /
                        static_cast<double>(m.classes);
    report.euc = 1.0 - mean;
    return report;
}

std::vector<std::vector<double>> cosine_diversity(std::span<const ScoreMatrix> members) {
    require(!members.empty(), ErrorCode::invalid_argument, "diversity needs at least one member");
    std::vector<ScoreMatrix> aligned;
    for (const auto& m : members) {
        validate(m);
        require(m.classes == members.front().classes, ErrorCode::dimension_mismatch,
                "member '" + m.tag + "' has a different class count");
        aligned.push_back(reorder(m, members.front().sample_ids));
    }
    const std::size_t n = aligned.size();
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : aligned[i].scores) s += v * v;
        norms[i] = std::sqrt(s);
    }
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        sim[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t e = 0; e < aligned[i].scores.size(); ++e) dot += aligned[i].scores[e] * aligned[j].scores[e];
            double c = (norms[i] > 0.0 && norms[j] > 0.0) ? dot / (norms[i] * norms[j]) : 0.0;
            c = std::clamp(c, -1.0, 1.0);
            sim[i][j] = sim[j][i] = c;
        }
    }
    return sim;
}

}  // namespace augens::ensemble
