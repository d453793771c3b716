#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "augens/cli/config.hpp"

namespace augens::cli {

/// Writes one augmented manifest per spec replicate under config.out.
/// Returns the process exit status.
int cmd_augment(const RunConfig& config, std::ostream& log);

/// Full toy experiment: per-protocol training of NoDA plus every APP replicate,
/// ensembles, reports. Writes metrics.tsv, diversity.tsv, wilcoxon.tsv,
/// manifest.tsv and scores/<tag>.csv under config.out; the metrics table also
/// goes to `report`.
int cmd_demo(const RunConfig& config, std::ostream& report, std::ostream& log);

int cmd_fuse(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out,
             ensemble::FusionRule rule, std::ostream& log);

/// Accuracy, EUC and per-class AUC of each score file; labels come from a manifest.
int cmd_metrics(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& manifest,
                const std::filesystem::path& out, std::ostream& report, std::ostream& log);

int cmd_diversity(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out,
                  std::ostream& report, std::ostream& log);

}  // namespace augens::cli
