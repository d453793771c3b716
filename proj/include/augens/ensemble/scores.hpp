#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace augens::ensemble {

/// N x K classifier scores, row i belonging to sample_ids[i].
struct ScoreMatrix {
    std::vector<std::string> sample_ids;
    std::size_t classes = 0;
    std::vector<double> scores;  // row-major
    std::string tag;

    ScoreMatrix() = default;
    ScoreMatrix(std::vector<std::string> ids, std::size_t k, std::string tag = {});

    std::size_t rows() const noexcept { return sample_ids.size(); }
    double& at(std::size_t i, std::size_t k) { return scores[i * classes + k]; }
    double at(std::size_t i, std::size_t k) const { return scores[i * classes + k]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(scores).subspan(i * classes, classes);
    }

    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;
};

/// Finite values, unique ids, consistent shape.
void validate(const ScoreMatrix& m);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> row);
std::vector<std::size_t> predictions(const ScoreMatrix& m);

/// Rows reordered to follow `ids`; throws when the id sets differ.
ScoreMatrix reorder(const ScoreMatrix& m, std::span<const std::string> ids);

ScoreMatrix softmax_rows(const ScoreMatrix& m);

/// Elementwise sum. Rows follow the first member's id order (other members are
/// reordered by id). Members are added in a canonical order (by tag, then by
/// content), so the result is bit-identical under any permutation of `members`.
ScoreMatrix sum_rule_fuse(std::span<const ScoreMatrix> members);

/// One row per group (in order of first appearance), the mean of its rows.
ScoreMatrix group_average(const ScoreMatrix& m, const std::map<std::string, std::string>& groups);

/// Fraction of rows whose argmax equals the label.
double accuracy(const ScoreMatrix& m, std::span<const int> labels);

/// Labels aligned with the rows of `m`.
std::vector<int> labels_for(const ScoreMatrix& m, const std::map<std::string, int>& labels);

// CSV with header `id,score_0,...,score_{K-1}`; values printed with 17
// significant digits so a round trip is exact.
void write_scores(const ScoreMatrix& m, std::ostream& os);
void write_scores(const ScoreMatrix& m, const std::filesystem::path& path);
ScoreMatrix read_scores(std::istream& is, const std::string& tag);
/// The tag is the file name without extension.
ScoreMatrix read_scores(const std::filesystem::path& path);

}  // namespace augens::ensemble
