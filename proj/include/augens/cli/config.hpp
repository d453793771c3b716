#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "augens/augment/spec.hpp"
#include "augens/data/dataset.hpp"
#include "augens/ensemble/ensemble.hpp"
#include "augens/ensemble/toy_classifier.hpp"

namespace augens::cli {

// Config grammar, one item per line:
//
//   # comment
//   key = value                  (top level until the first section)
//   [dataset]                    (at most once)
//   [app]                        (repeatable; one augmentation spec each)
//   [ensemble]                   (repeatable)
//
// Top level: seed, out, workers, save_images, test_fold, toy_iterations,
// toy_l2, toy_downsample.
// [dataset]: source = synthetic | directory | manifest, path, folds,
// n_classes, samples_per_class, image_size, noise_level, channels.
// [app]: id, seed, replicates, backend = dct | haar (APP11 only) and any
// augmentation parameter key.
// [ensemble]: name, preset = EnsDA_A | EnsDA_B | EnsDA_C | Ens_Base, x,
// members (comma separated tags), rule = sum | average, grouping.

struct DatasetConfig {
    enum class Source { synthetic, directory, manifest };

    Source source = Source::synthetic;
    std::filesystem::path path;
    std::size_t folds = 5;
    data::SyntheticSpec synthetic;
};

struct AppEntry {
    augment::AugmentationSpec spec;
    /// Explicit seed; otherwise derived from the global seed and the app id.
    std::optional<std::uint64_t> seed;
    std::string backend;
};

struct EnsembleEntry {
    std::string name;
    std::string preset;
    std::size_t x = 0;
    std::vector<std::string> members;
    ensemble::FusionRule rule = ensemble::FusionRule::sum;
    bool grouping = false;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path out = "augens_out";
    std::size_t workers = 1;
    bool save_images = false;
    int test_fold = -1;
    ensemble::ToyOptions toy;
    DatasetConfig dataset;
    std::vector<AppEntry> apps;
    std::vector<EnsembleEntry> ensembles;
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

/// Specs with seeds resolved and APP11 backends attached.
std::vector<augment::AugmentationSpec> resolved_specs(const RunConfig& config);

/// Score tag of replicate `run` (1-based) of an APP, e.g. `app3-run1`.
std::string run_tag(int app_id, std::size_t run);

/// Replicate `run` (1-based): run 1 keeps the seed, later runs derive one.
augment::AugmentationSpec replicate_spec(const augment::AugmentationSpec& spec, std::size_t run);

/// Ensembles with presets expanded against the configured apps. Without any
/// [ensemble] section the four presets are used.
std::vector<ensemble::EnsembleDef> resolved_ensembles(const RunConfig& config);

}  // namespace augens::cli
