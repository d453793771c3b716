#pragma once

#include <map>
#include <string>
#include <vector>

#include "augens/ensemble/metrics.hpp"
#include "augens/ensemble/scores.hpp"

namespace augens::ensemble {

enum class FusionRule { sum, average };

struct EnsembleDef {
    std::string name;
    std::vector<std::string> member_tags;
    FusionRule rule = FusionRule::sum;
    /// Average the rows of each view group before fusing.
    bool grouping = false;
};

struct EnsembleResult {
    ScoreMatrix fused;
    MetricReport report;
};

using ScoreRegistry = std::map<std::string, ScoreMatrix>;

/// `labels` maps sample ids (or group ids when grouping) to class indices;
/// `groups` maps sample ids to group ids and is only read when grouping.
EnsembleResult build_ensemble(const EnsembleDef& def, const ScoreRegistry& registry,
                              const std::map<std::string, int>& labels,
                              const std::map<std::string, std::string>& groups = {});

}  // namespace augens::ensemble
