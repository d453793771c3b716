#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "augens/augment/apps.hpp"
#include "augens/data/dataset.hpp"
#include "augens/error.hpp"
#include "augens/image_io.hpp"

namespace augens::data {

namespace fs = std::filesystem;

namespace {

template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) run(i);
            });
        }
        for (auto& t : threads) t.join();
    }
    // Report the lowest-index failure so the message does not depend on scheduling.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string rebase(const DatasetManifest& manifest, const Sample& s, const fs::path& out_root) {
    if (s.blob || manifest.root.empty()) return s.relative_path;
    const fs::path abs = fs::absolute(manifest.root / s.relative_path).lexically_normal();
    return abs.lexically_relative(fs::absolute(out_root).lexically_normal()).generic_string();
}

}  // namespace

std::shared_ptr<const spectral::PcaBasis> fit_shared_pca(const DatasetManifest& manifest,
                                                         std::span<const std::size_t> pool,
                                                         const augment::AppParams& params, std::uint64_t seed) {
    require(!pool.empty(), ErrorCode::insufficient_pool, "no training images to fit a PCA basis");
    std::vector<std::size_t> chosen(pool.begin(), pool.end());
    if (chosen.size() > params.pca_fit_cap) {
        Rng rng(derive_seed({seed, 0x9CA}));
        std::vector<std::size_t> picked;
        for (std::size_t j : rng.sample_without_replacement(chosen.size(), params.pca_fit_cap)) {
            picked.push_back(chosen[j]);
        }
        std::sort(picked.begin(), picked.end());
        chosen = std::move(picked);
    }
    std::vector<Plane> planes;
    for (std::size_t i : chosen) {
        const Image img = load_sample(manifest, manifest.samples[i]);
        for (std::size_t c = 0; c < img.channels(); ++c) planes.push_back(img.channel(c));
    }
    const std::size_t d = planes.front().size();
    Plane rows(planes.size(), d);
    for (std::size_t r = 0; r < planes.size(); ++r) {
        require(planes[r].same_shape(planes.front()), ErrorCode::dimension_mismatch,
                "shared PCA basis needs images of one size");
        std::copy(planes[r].values.begin(), planes[r].values.end(), rows.values.begin() + r * d);
    }
    require(rows.rows >= 2, ErrorCode::insufficient_pool, "PCA basis needs at least 2 image planes");
    const std::size_t k = std::min({params.pca_components, rows.rows - 1, d});
    return std::make_shared<const spectral::PcaBasis>(spectral::pca_fit(rows, k));
}

DatasetManifest export_augmented(const DatasetManifest& manifest, std::span<const augment::AugmentationSpec> specs,
                                 const fs::path& out_root, const ExportOptions& options) {
    validate(manifest);
    DatasetManifest out = manifest;
    if (specs.empty()) return out;

    out.root = out_root;
    for (auto& s : out.samples) s.relative_path = rebase(manifest, s, out_root);

    const std::vector<std::size_t> pool = training_pool(manifest, options.test_fold);
    require(!pool.empty(), ErrorCode::insufficient_pool, "training pool is empty");
    const bool gray = is_grayscale_dataset(manifest);

    std::vector<Image> images(manifest.samples.size());
    bool uniform = true;
    for (std::size_t i : pool) {
        Image img = load_sample(manifest, manifest.samples[i]);
        if (gray && img.channels() == 3) img = to_grayscale(img);
        validate_image(img);
        images[i] = std::move(img);
        uniform = uniform && images[i].same_shape(images[pool.front()]);
    }

    for (const auto& input_spec : specs) {
        augment::validate(input_spec);
        augment::AugmentationSpec spec = input_spec;
        const std::string dir = options.tag + "app" + std::to_string(spec.app_id);
        if (gray && augment::is_color_only(spec.app_id)) {
            out.notes.push_back("skipped " + dir + ": color-only method on a grayscale dataset");
            continue;
        }
        if (spec.app_id == 4 && !spec.pca_basis && uniform) {
            DatasetManifest view = manifest;
            for (std::size_t i : pool) view.samples[i].blob = std::make_shared<const Image>(images[i]);
            spec.pca_basis = fit_shared_pca(view, pool, spec.params, spec.seed);
        }
        const auto policy = spec.companions();

        if (options.write_images) {
            std::set<fs::path> dirs;
            for (std::size_t i : pool) dirs.insert((out_root / dir / manifest.samples[i].id).parent_path());
            for (const auto& d : dirs) fs::create_directories(d);
        }

        std::vector<std::vector<Image>> results(pool.size());
        parallel_for(pool.size(), options.workers, [&](std::size_t j) {
            const std::size_t idx = pool[j];
            const Sample& parent = manifest.samples[idx];
            const std::uint64_t key = sample_key(parent.id);
            std::vector<Image> companions;
            if (policy.total() > 0) {
                Rng rng(derive_seed({spec.seed, static_cast<std::uint64_t>(spec.app_id), key, 0xC0}));
                for (std::size_t c :
                     sample_companions(manifest, idx, policy.same_class, policy.other_class, rng, pool)) {
                    companions.push_back(images[c]);
                }
            }
            auto outputs = augment::apply_app(spec, images[idx], companions, key);
            if (options.write_images) {
                for (std::size_t k = 0; k < outputs.size(); ++k) {
                    save_image(outputs[k], out_root / dir / (parent.id + "_" + std::to_string(k) + ".png"));
                }
            }
            results[j] = std::move(outputs);
        });

        for (std::size_t j = 0; j < pool.size(); ++j) {
            const Sample& parent = manifest.samples[pool[j]];
            for (std::size_t k = 0; k < results[j].size(); ++k) {
                Sample s;
                s.id = dir + "/" + parent.id + "_" + std::to_string(k);
                s.relative_path = dir + "/" + parent.id + "_" + std::to_string(k) + ".png";
                s.label = parent.label;
                s.origin = Origin::augmented;
                s.app_id = spec.app_id;
                s.parent_id = parent.id;
                s.fold = parent.fold;
                s.group = parent.group;
                if (!options.write_images) s.blob = std::make_shared<const Image>(std::move(results[j][k]));
                out.samples.push_back(std::move(s));
            }
        }
    }
    validate(out);
    return out;
}

}  // namespace augens::data
