#include "augens/ensemble/ensemble.hpp"
#include "augens/error.hpp"

namespace augens::ensemble {

EnsembleResult build_ensemble(const EnsembleDef& def, const ScoreRegistry& registry,
                              const std::map<std::string, int>& labels,
                              const std::map<std::string, std::string>& groups) {
    require(!def.member_tags.empty(), ErrorCode::invalid_argument, "ensemble '" + def.name + "' has no members");
    std::vector<ScoreMatrix> members;
    for (const auto& tag : def.member_tags) {
        auto it = registry.find(tag);
        require(it != registry.end(), ErrorCode::invalid_argument,
                "ensemble '" + def.name + "' references unknown member '" + tag + "'");
        members.push_back(def.grouping ? group_average(it->second, groups) : it->second);
    }
    EnsembleResult result;
    result.fused = sum_rule_fuse(members);
    if (def.rule == FusionRule::average) {
        for (double& v : result.fused.scores) v /= static_cast<double>(members.size());
    }
    result.fused.tag = def.name;
    result.report = euc_multiclass(result.fused, labels_for(result.fused, labels));
    return result;
}

}  // namespace augens::ensemble
