#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "augens/augment/apps.hpp"
#include "augens/cli/commands.hpp"
#include "augens/ensemble/metrics.hpp"
#include "augens/ensemble/wilcoxon.hpp"
#include "augens/error.hpp"
#include "augens/image_io.hpp"

namespace augens::cli {

namespace fs = std::filesystem;
using ensemble::ScoreMatrix;

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string general(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorCode::io, "cannot write " + path.string());
    os << text;
    require(static_cast<bool>(os), ErrorCode::io, "write failed: " + path.string());
}

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

data::DatasetManifest build_dataset(const RunConfig& config) {
    const auto& d = config.dataset;
    data::DatasetManifest m;
    switch (d.source) {
        case DatasetConfig::Source::synthetic: {
            data::SyntheticSpec spec = d.synthetic;
            spec.seed = derive_seed({config.seed, 0x5E7});
            m = data::make_synthetic(spec);
            data::assign_folds(m, d.folds, config.seed);
            break;
        }
        case DatasetConfig::Source::directory:
            m = data::scan_directory(d.path);
            data::assign_folds(m, d.folds, config.seed);
            break;
        case DatasetConfig::Source::manifest: {
            m = data::read_manifest(d.path);
            bool unassigned = false;
            for (const auto& s : m.samples) unassigned = unassigned || s.fold < 0;
            if (m.protocol.kind == data::Protocol::Kind::kfold && unassigned) {
                data::assign_folds(m, m.protocol.k, config.seed);
            }
            break;
        }
    }
    return m;
}

std::string matrix_tsv(const std::vector<std::string>& tags, const std::vector<std::vector<double>>& sim) {
    std::ostringstream os;
    os << "tag";
    for (const auto& t : tags) os << '\t' << t;
    os << '\n';
    for (std::size_t i = 0; i < tags.size(); ++i) {
        os << tags[i];
        for (double v : sim[i]) os << '\t' << fixed(v);
        os << '\n';
    }
    return os.str();
}

struct Classifier {
    std::string tag;
    bool augmented = false;
    augment::AugmentationSpec spec;
};

}  // namespace

int cmd_augment(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        data::DatasetManifest manifest = build_dataset(config);
        // In-memory originals are written out so every manifest path resolves.
        if (config.dataset.source == DatasetConfig::Source::synthetic) {
            for (auto& s : manifest.samples) {
                s.relative_path = "originals/" + s.relative_path;
                fs::create_directories((config.out / s.relative_path).parent_path());
                save_image(*s.blob, config.out / s.relative_path);
                s.blob.reset();
            }
            manifest.root = config.out;
        }
        const auto specs = resolved_specs(config);
        for (const auto& spec : specs) {
            for (std::size_t run = 1; run <= spec.replicates; ++run) {
                const auto r = replicate_spec(spec, run);
                data::ExportOptions options;
                options.test_fold = config.test_fold;
                options.workers = config.workers;
                options.tag = spec.replicates > 1 ? "run" + std::to_string(run) + "/" : std::string();
                const std::string name =
                    spec.replicates > 1 ? run_tag(spec.app_id, run) : "app" + std::to_string(spec.app_id);
                const std::size_t before = manifest.samples.size();
                const auto exported = data::export_augmented(manifest, std::span(&r, 1), config.out, options);
                const fs::path path = config.out / ("manifest_" + name + ".tsv");
                data::write_manifest(exported, path);
                log << name << ": " << exported.samples.size() - before << " augmented images, manifest "
                    << path.string() << "\n";
                for (std::size_t n = manifest.notes.size(); n < exported.notes.size(); ++n) {
                    log << name << ": " << exported.notes[n] << "\n";
                }
            }
        }
    });
}

int cmd_demo(const RunConfig& config, std::ostream& report, std::ostream& log) {
    return guarded(log, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const data::DatasetManifest manifest = build_dataset(config);
        const bool gray = data::is_grayscale_dataset(manifest);
        const std::size_t k = manifest.class_count();

        std::vector<int> test_folds;
        if (manifest.protocol.kind == data::Protocol::Kind::kfold) {
            for (std::size_t f = 0; f < manifest.protocol.k; ++f) test_folds.push_back(static_cast<int>(f));
        } else {
            test_folds.push_back(data::kTestFold);
        }

        // Evaluation rows: every original that falls in some test fold, in manifest order.
        std::vector<std::size_t> eval;
        std::vector<Image> images(manifest.samples.size());
        std::map<std::string, int> labels;
        std::map<std::string, std::string> groups;
        for (std::size_t i : manifest.originals()) {
            const auto& s = manifest.samples[i];
            Image img = data::load_sample(manifest, s);
            if (gray && img.channels() == 3) img = to_grayscale(img);
            images[i] = std::move(img);
            labels[s.id] = s.label;
            groups[s.id] = s.group.empty() ? s.id : s.group;
            if (std::find(test_folds.begin(), test_folds.end(), s.fold) != test_folds.end()) eval.push_back(i);
        }
        for (const auto& [id, group] : groups) {
            const int label = labels[id];
            auto [it, added] = labels.emplace(group, label);
            require(added || it->second == label, ErrorCode::invalid_argument, "group " + group + " mixes labels");
        }
        std::vector<std::string> eval_ids;
        std::map<std::string, std::size_t> eval_row;
        for (std::size_t i : eval) {
            eval_row[manifest.samples[i].id] = eval_ids.size();
            eval_ids.push_back(manifest.samples[i].id);
        }

        std::vector<Classifier> classifiers{{"noda", false, {}}};
        for (const auto& spec : resolved_specs(config)) {
            for (std::size_t run = 1; run <= spec.replicates; ++run) {
                classifiers.push_back({run_tag(spec.app_id, run), true, replicate_spec(spec, run)});
            }
        }

        ensemble::ToyOptions toy = config.toy;
        toy.classes = k;
        ensemble::ScoreRegistry registry;
        std::map<std::string, std::vector<double>> fold_accuracy;
        std::vector<std::string> skipped;
        for (const auto& c : classifiers) {
            if (c.augmented && gray && augment::is_color_only(c.spec.app_id)) {
                log << c.tag << ": skipped, color-only method on a grayscale dataset\n";
                skipped.push_back(c.tag);
                continue;
            }
            ScoreMatrix logits(eval_ids, k, c.tag);
            std::vector<double> per_fold;
            for (int f : test_folds) {
                std::vector<Image> train;
                std::vector<int> train_labels;
                for (std::size_t i : data::training_pool(manifest, f)) {
                    train.push_back(images[i]);
                    train_labels.push_back(manifest.samples[i].label);
                }
                if (c.augmented) {
                    data::ExportOptions options;
                    options.test_fold = f;
                    options.write_images = config.save_images;
                    options.workers = config.workers;
                    options.tag = "fold" + std::to_string(f) + "/" + c.tag + "/";
                    const fs::path root = config.out / "augmented";
                    const auto exported = data::export_augmented(manifest, std::span(&c.spec, 1), root, options);
                    if (config.save_images) {
                        data::write_manifest(exported, root / ("manifest_fold" + std::to_string(f) + "_" + c.tag + ".tsv"));
                    }
                    for (const auto& s : exported.samples) {
                        if (s.origin != data::Origin::augmented) continue;
                        train.push_back(data::load_sample(exported, s));
                        train_labels.push_back(s.label);
                    }
                }
                const auto model = ensemble::toy_train(train, train_labels, toy);
                std::vector<Image> test;
                std::vector<std::string> test_ids;
                std::vector<int> test_labels;
                for (std::size_t i : eval) {
                    if (manifest.samples[i].fold != f) continue;
                    test.push_back(images[i]);
                    test_ids.push_back(manifest.samples[i].id);
                    test_labels.push_back(manifest.samples[i].label);
                }
                const auto scores = ensemble::toy_predict(model, test, test_ids, c.tag);
                per_fold.push_back(ensemble::accuracy(scores, test_labels));
                for (std::size_t r = 0; r < scores.rows(); ++r) {
                    for (std::size_t j = 0; j < k; ++j) logits.at(eval_row[test_ids[r]], j) = scores.at(r, j);
                }
            }
            ScoreMatrix probs = ensemble::softmax_rows(logits);
            ensemble::write_scores(probs, config.out / "scores" / (c.tag + ".csv"));
            registry.emplace(c.tag, std::move(probs));
            fold_accuracy[c.tag] = std::move(per_fold);
            log << c.tag << ": trained on " << test_folds.size() << " fold(s)\n";
        }

        // Metrics table: NoDA, one row per APP (its first run), then ensembles.
        std::ostringstream table;
        table << "row\tmembers\taccuracy\teuc\n";
        auto emit = [&](const std::string& row, std::size_t members, const ScoreMatrix& m) {
            const auto rep = ensemble::euc_multiclass(m, ensemble::labels_for(m, labels));
            table << row << '\t' << members << '\t' << fixed(rep.accuracy) << '\t' << fixed(rep.euc) << '\n';
        };
        emit("NoDA", 1, registry.at("noda"));
        for (const auto& spec : resolved_specs(config)) {
            const std::string row = "App" + std::to_string(spec.app_id);
            const std::string tag = run_tag(spec.app_id, 1);
            if (registry.count(tag)) {
                emit(row, 1, registry.at(tag));
            } else {
                table << row << "\t0\tskipped\tskipped\n";
            }
        }
        std::ostringstream tests;
        tests << "row\tn\tstatistic\tp_two_sided\n";
        auto compare = [&](const std::string& row, const std::vector<double>& acc) {
            const auto w = ensemble::wilcoxon_signed_rank(acc, fold_accuracy.at("noda"));
            tests << row << '\t' << w.n_effective << '\t' << general(w.statistic) << '\t' << general(w.p_two_sided)
                  << '\n';
        };
        for (const auto& c : classifiers) {
            if (c.augmented && fold_accuracy.count(c.tag)) compare(c.tag, fold_accuracy.at(c.tag));
        }
        for (auto def : resolved_ensembles(config)) {
            std::erase_if(def.member_tags, [&](const std::string& t) {
                return std::find(skipped.begin(), skipped.end(), t) != skipped.end();
            });
            if (def.member_tags.empty()) {
                table << def.name << "\t0\tskipped\tskipped\n";
                continue;
            }
            const auto result = ensemble::build_ensemble(def, registry, labels, groups);
            table << def.name << '\t' << def.member_tags.size() << '\t' << fixed(result.report.accuracy) << '\t'
                  << fixed(result.report.euc) << '\n';
            ensemble::write_scores(result.fused, config.out / "scores" / ("ensemble_" + def.name + ".csv"));
            std::vector<double> acc;
            for (int f : test_folds) {
                std::vector<std::string> ids;
                std::vector<int> lab;
                for (std::size_t i : eval) {
                    if (manifest.samples[i].fold != f) continue;
                    ids.push_back(manifest.samples[i].id);
                    lab.push_back(manifest.samples[i].label);
                }
                if (def.grouping) {
                    acc.push_back(result.report.accuracy);
                    continue;
                }
                ScoreMatrix part(ids, k);
                for (std::size_t r = 0; r < ids.size(); ++r) {
                    const auto row = result.fused.row(eval_row[ids[r]]);
                    std::copy(row.begin(), row.end(), part.scores.begin() + static_cast<std::ptrdiff_t>(r * k));
                }
                acc.push_back(ensemble::accuracy(part, lab));
            }
            compare(def.name, acc);
        }

        std::vector<std::string> members;
        std::vector<ScoreMatrix> matrices;
        for (const auto& c : classifiers) {
            if (c.augmented && registry.count(c.tag)) {
                members.push_back(c.tag);
                matrices.push_back(registry.at(c.tag));
            }
        }
        if (!matrices.empty()) {
            write_text(config.out / "diversity.tsv", matrix_tsv(members, ensemble::cosine_diversity(matrices)));
        }
        write_text(config.out / "metrics.tsv", table.str());
        write_text(config.out / "wilcoxon.tsv", tests.str());
        data::write_manifest(manifest, config.out / "manifest.tsv");
        report << table.str();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << "demo finished in " << fixed(secs) << " s\n";
    });
}

int cmd_fuse(const std::vector<fs::path>& inputs, const fs::path& out, ensemble::FusionRule rule,
             std::ostream& log) {
    return guarded(log, [&] {
        require(!inputs.empty(), ErrorCode::invalid_argument, "fuse needs at least one score file");
        require(!out.empty(), ErrorCode::invalid_argument, "fuse needs an output path");
        std::vector<ScoreMatrix> members;
        for (const auto& p : inputs) members.push_back(ensemble::read_scores(p));
        ScoreMatrix fused = ensemble::sum_rule_fuse(members);
        if (rule == ensemble::FusionRule::average) {
            for (double& v : fused.scores) v /= static_cast<double>(members.size());
        }
        fused.tag = out.stem().string();
        ensemble::write_scores(fused, out);
        log << "fused " << members.size() << " score files into " << out.string() << "\n";
    });
}

int cmd_metrics(const std::vector<fs::path>& inputs, const fs::path& manifest_path, const fs::path& out,
                std::ostream& report, std::ostream& log) {
    return guarded(log, [&] {
        require(!inputs.empty(), ErrorCode::invalid_argument, "metrics needs at least one score file");
        const auto manifest = data::read_manifest(manifest_path);
        std::map<std::string, int> labels;
        for (const auto& s : manifest.samples) {
            labels[s.id] = s.label;
            if (!s.group.empty()) labels.emplace(s.group, s.label);
        }
        std::ostringstream table;
        table << "tag\taccuracy\teuc";
        for (std::size_t c = 0; c < manifest.class_count(); ++c) table << "\tauc_" << c;
        table << '\n';
        for (const auto& p : inputs) {
            const auto m = ensemble::read_scores(p);
            const auto rep = ensemble::euc_multiclass(m, ensemble::labels_for(m, labels));
            table << m.tag << '\t' << fixed(rep.accuracy) << '\t' << fixed(rep.euc);
            for (double a : rep.per_class_auc) table << '\t' << fixed(a);
            table << '\n';
        }
        report << table.str();
        if (!out.empty()) write_text(out, table.str());
    });
}

int cmd_diversity(const std::vector<fs::path>& inputs, const fs::path& out, std::ostream& report,
                  std::ostream& log) {
    return guarded(log, [&] {
        require(!inputs.empty(), ErrorCode::invalid_argument, "diversity needs at least one score file");
        std::vector<ScoreMatrix> members;
        std::vector<std::string> tags;
        for (const auto& p : inputs) {
            members.push_back(ensemble::read_scores(p));
            tags.push_back(members.back().tag);
        }
        const std::string text = matrix_tsv(tags, ensemble::cosine_diversity(members));
        report << text;
        if (!out.empty()) write_text(out, text);
    });
}

}  // namespace augens::cli
