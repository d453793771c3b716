#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "augens/ensemble/scores.hpp"
#include "augens/error.hpp"

namespace augens::ensemble {

namespace fs = std::filesystem;

ScoreMatrix::ScoreMatrix(std::vector<std::string> ids, std::size_t k, std::string t)
    : sample_ids(std::move(ids)), classes(k), scores(sample_ids.size() * k, 0.0), tag(std::move(t)) {}

void validate(const ScoreMatrix& m) {
    require(m.classes >= 1, ErrorCode::invalid_argument, "score matrix '" + m.tag + "' has no classes");
    require(m.scores.size() == m.rows() * m.classes, ErrorCode::dimension_mismatch,
            "score matrix '" + m.tag + "' has inconsistent shape");
    for (double v : m.scores) {
        require(std::isfinite(v), ErrorCode::invalid_argument, "score matrix '" + m.tag + "' has non-finite values");
    }
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& id : m.sample_ids) {
        require(seen.emplace(id, 0).second, ErrorCode::invalid_argument,
                "score matrix '" + m.tag + "' repeats sample id " + id);
    }
}

std::size_t argmax(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k) {
        if (row[k] > row[best]) best = k;
    }
    return best;
}

std::vector<std::size_t> predictions(const ScoreMatrix& m) {
    std::vector<std::size_t> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = argmax(m.row(i));
    return out;
}

ScoreMatrix reorder(const ScoreMatrix& m, std::span<const std::string> ids) {
    require(ids.size() == m.rows(), ErrorCode::dimension_mismatch,
            "score matrix '" + m.tag + "' has " + std::to_string(m.rows()) + " rows, expected " +
                std::to_string(ids.size()));
    if (std::equal(ids.begin(), ids.end(), m.sample_ids.begin())) return m;
    std::unordered_map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < m.rows(); ++i) where.emplace(m.sample_ids[i], i);
    ScoreMatrix out(std::vector<std::string>(ids.begin(), ids.end()), m.classes, m.tag);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = where.find(ids[i]);
        require(it != where.end(), ErrorCode::dimension_mismatch,
                "score matrix '" + m.tag + "' lacks sample id " + ids[i]);
        std::copy_n(m.scores.begin() + static_cast<std::ptrdiff_t>(it->second * m.classes), m.classes,
                    out.scores.begin() + static_cast<std::ptrdiff_t>(i * m.classes));
    }
    return out;
}

ScoreMatrix softmax_rows(const ScoreMatrix& m) {
    ScoreMatrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double total = 0.0;
        for (std::size_t k = 0; k < m.classes; ++k) total += (out.at(i, k) = std::exp(row[k] - mx));
        for (std::size_t k = 0; k < m.classes; ++k) out.at(i, k) /= total;
    }
    return out;
}

ScoreMatrix sum_rule_fuse(std::span<const ScoreMatrix> members) {
    require(!members.empty(), ErrorCode::invalid_argument, "fusion needs at least one member");
    const ScoreMatrix& first = members.front();
    std::vector<ScoreMatrix> aligned;
    for (const auto& m : members) {
        validate(m);
        require(m.classes == first.classes, ErrorCode::dimension_mismatch,
                "member '" + m.tag + "' has " + std::to_string(m.classes) + " classes, expected " +
                    std::to_string(first.classes));
        aligned.push_back(reorder(m, first.sample_ids));
    }
    std::vector<std::size_t> order(aligned.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (aligned[a].tag != aligned[b].tag) return aligned[a].tag < aligned[b].tag;
        return aligned[a].scores < aligned[b].scores;
    });
    ScoreMatrix out(first.sample_ids, first.classes, "fused");
    for (std::size_t j : order) {
        for (std::size_t e = 0; e < out.scores.size(); ++e) out.scores[e] += aligned[j].scores[e];
    }
    return out;
}

ScoreMatrix group_average(const ScoreMatrix& m, const std::map<std::string, std::string>& groups) {
    validate(m);
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::size_t> row_slot(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto it = groups.find(m.sample_ids[i]);
        require(it != groups.end(), ErrorCode::invalid_argument, "sample " + m.sample_ids[i] + " has no group");
        auto [pos, added] = slot.emplace(it->second, names.size());
        if (added) names.push_back(it->second);
        row_slot[i] = pos->second;
    }
    ScoreMatrix out(names, m.classes, m.tag);
    std::vector<std::size_t> count(names.size(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ++count[row_slot[i]];
        for (std::size_t k = 0; k < m.classes; ++k) out.at(row_slot[i], k) += m.at(i, k);
    }
    for (std::size_t g = 0; g < names.size(); ++g) {
        for (std::size_t k = 0; k < m.classes; ++k) out.at(g, k) /= static_cast<double>(count[g]);
    }
    return out;
}

double accuracy(const ScoreMatrix& m, std::span<const int> labels) {
    require(labels.size() == m.rows(), ErrorCode::dimension_mismatch, "label count differs from score rows");
    require(m.rows() > 0, ErrorCode::invalid_argument, "accuracy of an empty score matrix");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (labels[i] >= 0 && argmax(m.row(i)) == static_cast<std::size_t>(labels[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(m.rows());
}

std::vector<int> labels_for(const ScoreMatrix& m, const std::map<std::string, int>& labels) {
    std::vector<int> out;
    out.reserve(m.rows());
    for (const auto& id : m.sample_ids) {
        auto it = labels.find(id);
        require(it != labels.end(), ErrorCode::invalid_argument, "no label for sample " + id);
        out.push_back(it->second);
    }
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

double parse_double(const std::string& text, std::size_t line) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    require(ec == std::errc() && ptr == end, ErrorCode::parse,
            "score line " + std::to_string(line) + ": bad number '" + text + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_scores(const ScoreMatrix& m, std::ostream& os) {
    validate(m);
    os << "id";
    for (std::size_t k = 0; k < m.classes; ++k) os << ",score_" << k;
    os << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        require(m.sample_ids[i].find_first_of(",\n\r") == std::string::npos, ErrorCode::invalid_argument,
                "sample id '" + m.sample_ids[i] + "' cannot be written to CSV");
        os << m.sample_ids[i];
        for (std::size_t k = 0; k < m.classes; ++k) os << ',' << format_double(m.at(i, k));
        os << '\n';
    }
}

void write_scores(const ScoreMatrix& m, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path.string());
    write_scores(m, os);
    require(static_cast<bool>(os), ErrorCode::io, "write failed: " + path.string());
}

ScoreMatrix read_scores(std::istream& is, const std::string& tag) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), ErrorCode::parse, "score file '" + tag + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    require(header.size() >= 2 && header[0] == "id", ErrorCode::parse,
            "score file '" + tag + "' needs a header `id,score_0,...`");
    for (std::size_t k = 1; k < header.size(); ++k) {
        require(header[k] == "score_" + std::to_string(k - 1), ErrorCode::parse,
                "score file '" + tag + "': unexpected column '" + header[k] + "'");
    }
    ScoreMatrix m;
    m.tag = tag;
    m.classes = header.size() - 1;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        require(f.size() == header.size(), ErrorCode::parse,
                "score file '" + tag + "' line " + std::to_string(lineno) + ": expected " +
                    std::to_string(header.size()) + " fields");
        m.sample_ids.push_back(f[0]);
        for (std::size_t k = 1; k < f.size(); ++k) m.scores.push_back(parse_double(f[k], lineno));
    }
    validate(m);
    return m;
}

ScoreMatrix read_scores(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorCode::io, "cannot open " + path.string());
    return read_scores(is, path.stem().string());
}

}  // namespace augens::ensemble
