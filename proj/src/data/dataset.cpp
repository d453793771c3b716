#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include "augens/data/dataset.hpp"
#include "augens/error.hpp"
#include "augens/image_io.hpp"

namespace augens::data {

namespace fs = std::filesystem;

const Sample* DatasetManifest::find(const std::string& id) const {
    for (const auto& s : samples) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

std::vector<std::size_t> DatasetManifest::originals() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].origin == Origin::original) out.push_back(i);
    }
    return out;
}

void validate(const DatasetManifest& manifest) {
    require(!manifest.classes.empty(), ErrorCode::invalid_argument, "manifest has no classes");
    std::vector<std::size_t> per_class(manifest.classes.size(), 0);
    std::map<std::string, const Sample*> by_id;
    for (const auto& s : manifest.samples) {
        require(s.label >= 0 && static_cast<std::size_t>(s.label) < manifest.classes.size(),
                ErrorCode::invalid_argument, "sample " + s.id + " has label out of range");
        require(by_id.emplace(s.id, &s).second, ErrorCode::invalid_argument, "duplicate sample id " + s.id);
        if (s.origin == Origin::original) ++per_class[static_cast<std::size_t>(s.label)];
    }
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        require(per_class[c] > 0, ErrorCode::invalid_argument, "class '" + manifest.classes[c] + "' is empty");
    }
    for (const auto& s : manifest.samples) {
        if (s.origin != Origin::augmented) continue;
        auto it = by_id.find(s.parent_id);
        require(it != by_id.end(), ErrorCode::invalid_argument, "augmented sample " + s.id + " has no parent");
        require(it->second->origin == Origin::original, ErrorCode::invalid_argument,
                "augmented sample " + s.id + " must point at an original");
        require(it->second->label == s.label, ErrorCode::invalid_argument,
                "augmented sample " + s.id + " changes its parent's label");
    }
}

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".bmp";
}

}  // namespace

DatasetManifest scan_directory(const fs::path& root) {
    require(fs::is_directory(root), ErrorCode::io, "dataset root is not a directory: " + root.string());
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && entry.path().filename().string().front() != '.') class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    require(class_dirs.size() >= 2, ErrorCode::invalid_argument,
            "need at least 2 class subdirectories under " + root.string());

    DatasetManifest m;
    m.root = root;
    for (std::size_t label = 0; label < class_dirs.size(); ++label) {
        const std::string cls = class_dirs[label].filename().string();
        m.classes.push_back(cls);
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(class_dirs[label])) {
            if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::size_t kept = 0;
        for (const auto& f : files) {
            const std::string rel = cls + "/" + f.filename().string();
            try {
                validate_image(load_image(f));
            } catch (const Error& e) {
                const std::string note = "skipped unreadable image " + rel + " (" + e.what() + ")";
                std::clog << "warning: " << note << "\n";
                m.notes.push_back(note);
                continue;
            }
            Sample s;
            s.id = cls + "/" + f.stem().string();
            s.relative_path = rel;
            s.label = static_cast<int>(label);
            m.samples.push_back(std::move(s));
            ++kept;
        }
        require(kept > 0, ErrorCode::invalid_argument, "class '" + cls + "' has no readable images");
    }
    validate(m);
    return m;
}

std::vector<int> stratified_folds(const DatasetManifest& manifest, std::size_t k, std::uint64_t seed) {
    require(k >= 2, ErrorCode::invalid_argument, "k must be >= 2");
    std::vector<std::vector<std::size_t>> members(manifest.classes.size());
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        if (manifest.samples[i].origin == Origin::original) {
            members[static_cast<std::size_t>(manifest.samples[i].label)].push_back(i);
        }
    }
    std::vector<int> folds(manifest.samples.size(), -1);
    std::size_t offset = 0;
    for (std::size_t c = 0; c < members.size(); ++c) {
        require(members[c].size() >= k, ErrorCode::invalid_argument,
                "class '" + manifest.classes[c] + "' has " + std::to_string(members[c].size()) +
                    " samples, fewer than k = " + std::to_string(k));
        Rng rng(derive_seed({seed, 0xF01D, c}));
        rng.shuffle(members[c]);
        // Rotating the starting fold keeps overall fold sizes balanced too.
        for (std::size_t j = 0; j < members[c].size(); ++j) {
            folds[members[c][j]] = static_cast<int>((offset + j) % k);
        }
        offset += members[c].size();
    }
    std::map<std::string, int> by_id;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        if (folds[i] >= 0) by_id[manifest.samples[i].id] = folds[i];
    }
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        if (manifest.samples[i].origin == Origin::augmented) {
            auto it = by_id.find(manifest.samples[i].parent_id);
            if (it != by_id.end()) folds[i] = it->second;
        }
    }
    return folds;
}

void assign_folds(DatasetManifest& manifest, std::size_t k, std::uint64_t seed) {
    const auto folds = stratified_folds(manifest, k, seed);
    for (std::size_t i = 0; i < folds.size(); ++i) manifest.samples[i].fold = folds[i];
    manifest.protocol = Protocol::kfold(k);
}

std::vector<std::size_t> training_pool(const DatasetManifest& manifest, int test_fold) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const Sample& s = manifest.samples[i];
        if (s.origin != Origin::original) continue;
        if (test_fold >= 0 && s.fold == test_fold) continue;
        pool.push_back(i);
    }
    return pool;
}

std::vector<std::size_t> sample_companions(const DatasetManifest& manifest, std::size_t sample, std::size_t n_same,
                                           std::size_t n_other, Rng& rng, std::span<const std::size_t> pool) {
    require(sample < manifest.samples.size(), ErrorCode::invalid_argument, "sample index out of range");
    const int label = manifest.samples[sample].label;
    std::vector<std::size_t> same, other;
    for (std::size_t i : pool) {
        if (i == sample) continue;
        (manifest.samples[i].label == label ? same : other).push_back(i);
    }
    const std::string cls = manifest.classes[static_cast<std::size_t>(label)];
    require(same.size() >= n_same, ErrorCode::insufficient_pool,
            "class '" + cls + "' has " + std::to_string(same.size()) + " other training samples, need " +
                std::to_string(n_same));
    require(other.size() >= n_other, ErrorCode::insufficient_pool,
            "classes other than '" + cls + "' have " + std::to_string(other.size()) + " training samples, need " +
                std::to_string(n_other));
    std::vector<std::size_t> out;
    for (std::size_t j : rng.sample_without_replacement(same.size(), n_same)) out.push_back(same[j]);
    for (std::size_t j : rng.sample_without_replacement(other.size(), n_other)) out.push_back(other[j]);
    return out;
}

Image load_sample(const DatasetManifest& manifest, const Sample& sample) {
    if (sample.blob) return *sample.blob;
    return load_image(manifest.root / sample.relative_path);
}

bool is_grayscale_dataset(const DatasetManifest& manifest) {
    for (const auto& s : manifest.samples) {
        if (s.origin != Origin::original) continue;
        if (!is_grayscale(load_sample(manifest, s))) return false;
    }
    return true;
}

std::uint64_t sample_key(const std::string& id) {
    // FNV-1a
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace augens::data
