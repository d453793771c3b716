#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "augens/augment/spec.hpp"
#include "augens/image.hpp"
#include "augens/rng.hpp"

namespace augens::data {

enum class Origin { original, augmented };

struct Sample {
    std::string id;
    /// Path relative to the manifest root (also used as the export location).
    std::string relative_path;
    /// In-memory pixels; when set, takes precedence over the path.
    std::shared_ptr<const Image> blob;
    int label = 0;
    Origin origin = Origin::original;
    int app_id = 0;          // augmented samples only
    std::string parent_id;   // augmented samples only
    int fold = -1;           // k-fold index, or 0 = train / 1 = test for train_test
    std::string group;       // optional multi-view group; scores are averaged per group
};

struct Protocol {
    enum class Kind { kfold, train_test };

    Kind kind = Kind::kfold;
    std::size_t k = 5;

    static Protocol kfold(std::size_t k) { return {Kind::kfold, k}; }
    static Protocol train_test() { return {Kind::train_test, 2}; }
};

inline constexpr int kTrainFold = 0;
inline constexpr int kTestFold = 1;

struct DatasetManifest {
    std::filesystem::path root;
    std::vector<std::string> classes;
    Protocol protocol;
    std::vector<Sample> samples;
    /// Skipped files, skipped APPs and similar events, in order of occurrence.
    std::vector<std::string> notes;

    std::size_t class_count() const noexcept { return classes.size(); }
    const Sample* find(const std::string& id) const;
    std::vector<std::size_t> originals() const;
};

/// Checks labels, class non-emptiness, unique ids and provenance links.
void validate(const DatasetManifest& manifest);

/// Class-per-subdirectory layout. Classes and files are visited in
/// lexicographic order; labels follow sorted class names. Unreadable images
/// are skipped and recorded in `notes`.
DatasetManifest scan_directory(const std::filesystem::path& root);

/// Per class, members are shuffled with `seed` and dealt round-robin into k
/// folds, so per-class fold sizes differ by at most one. Returns one fold index
/// per sample (augmented samples inherit their parent's fold).
std::vector<int> stratified_folds(const DatasetManifest& manifest, std::size_t k, std::uint64_t seed);
void assign_folds(DatasetManifest& manifest, std::size_t k, std::uint64_t seed);

/// Indices of original samples that may serve as training data when
/// `test_fold` is held out. `test_fold < 0` means every original.
std::vector<std::size_t> training_pool(const DatasetManifest& manifest, int test_fold);

/// Draws companions for `sample` from `pool` without replacement: `n_same`
/// from its class, then `n_other` from the other classes. The sample itself is
/// never returned.
std::vector<std::size_t> sample_companions(const DatasetManifest& manifest, std::size_t sample, std::size_t n_same,
                                           std::size_t n_other, Rng& rng, std::span<const std::size_t> pool);

Image load_sample(const DatasetManifest& manifest, const Sample& sample);

/// True when every original image is grayscale (1 channel, or 3 identical).
bool is_grayscale_dataset(const DatasetManifest& manifest);

/// Stable 64-bit hash of a sample id, used as the per-sample stream key.
std::uint64_t sample_key(const std::string& id);

// Manifest text: '#' header lines (classes, protocol, notes) followed by one
// `id<TAB>relative_path<TAB>label<TAB>origin<TAB>parent_id<TAB>fold[<TAB>group]`
// record per sample. origin is `original` or `app<N>`; parent_id is `-` for
// originals.
void write_manifest(const DatasetManifest& manifest, std::ostream& os);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(std::istream& is, const std::filesystem::path& root);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct SyntheticSpec {
    std::size_t n_classes = 3;
    std::size_t samples_per_class = 20;
    std::size_t image_size = 32;
    double noise_level = 0.3;
    std::uint64_t seed = 0;
    std::size_t channels = 3;
};

/// Blurred blob patterns with class-specific layout and tint plus noise that
/// scales with `noise_level` (zero noise makes all members of a class equal).
/// Samples carry in-memory blobs.
DatasetManifest make_synthetic(const SyntheticSpec& spec);

struct ExportOptions {
    /// Held-out fold; its samples are never augmented nor used as companions.
    int test_fold = -1;
    /// Write PNGs under out_root. When false the augmented samples keep their
    /// pixels in memory and only paths are recorded.
    bool write_images = true;
    std::size_t workers = 0;  // 0 = hardware concurrency
    /// Prefix of the per-spec output directory; defaults to `app<N>`.
    std::string tag;
};

/// Augments every training original with each spec. The result holds the
/// input samples followed by the augmented ones in (spec, sample, output)
/// order. Color-only APPs on a grayscale dataset are skipped with a note.
DatasetManifest export_augmented(const DatasetManifest& manifest, std::span<const augment::AugmentationSpec> specs,
                                 const std::filesystem::path& out_root, const ExportOptions& options = {});

/// Shared PCA basis from the channel planes of (a capped random subset of) the
/// training images; used by APP4 when all images share one size.
std::shared_ptr<const spectral::PcaBasis> fit_shared_pca(const DatasetManifest& manifest,
                                                         std::span<const std::size_t> pool,
                                                         const augment::AppParams& params, std::uint64_t seed);

}  // namespace augens::data
