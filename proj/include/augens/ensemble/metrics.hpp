#pragma once

#include <span>
#include <vector>

#include "augens/ensemble/scores.hpp"

namespace augens::ensemble {

struct MetricReport {
    double accuracy = 0.0;
    double euc = 0.0;
    std::vector<double> per_class_auc;

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// Mann-Whitney AUC: P(pos > neg) + 0.5 P(pos == neg), from tie-averaged ranks.
/// Ranks are kept doubled so the count is an exact integer.
double auc_binary(std::span<const double> pos, std::span<const double> neg);

/// One-vs-all AUC per class; euc = 1 - mean AUC.
MetricReport euc_multiclass(const ScoreMatrix& m, std::span<const int> labels);

/// Cosine similarity of the flattened (id-aligned) score matrices. A member
/// with an all-zero matrix has similarity 0 to every other member.
std::vector<std::vector<double>> cosine_diversity(std::span<const ScoreMatrix> members);

}  // namespace augens::ensemble
