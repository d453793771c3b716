#include <iostream>

#include <CLI11.hpp>

#include "augens/cli/commands.hpp"
#include "augens/error.hpp"

namespace fs = std::filesystem;
using namespace augens;

namespace {

cli::RunConfig config_for(const std::string& path, const std::optional<std::uint64_t>& seed,
                          const std::string& out) {
    cli::RunConfig config = path.empty() ? cli::RunConfig{} : cli::load_config(path);
    if (seed) config.seed = *seed;
    if (!out.empty()) config.out = out;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"augens: image augmentation sets and ensemble evaluation"};
    app.require_subcommand(1);

    std::string config_path, out, manifest, rule = "sum";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> inputs;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Global seed");
        sub->add_option("--out", out, "Output directory or file");
    };

    auto* augment = app.add_subcommand("augment", "Augment a dataset; one manifest per APP");
    augment->add_option("--config", config_path, "Run config file")->required()->check(CLI::ExistingFile);
    add_common(augment);

    auto* demo = app.add_subcommand("demo", "Toy end-to-end experiment with ensembles and reports");
    demo->add_option("--config", config_path, "Run config file")->required()->check(CLI::ExistingFile);
    add_common(demo);

    auto* fuse = app.add_subcommand("fuse", "Sum-rule fusion of score files");
    fuse->add_option("inputs", inputs, "Score CSV files")->required()->check(CLI::ExistingFile);
    fuse->add_option("--rule", rule, "sum or average")->check(CLI::IsMember({"sum", "average"}));
    add_common(fuse);
    fuse->get_option("--out")->required();

    auto* metrics = app.add_subcommand("metrics", "Accuracy, EUC and per-class AUC of score files");
    metrics->add_option("inputs", inputs, "Score CSV files")->required()->check(CLI::ExistingFile);
    metrics->add_option("--manifest", manifest, "Manifest holding the labels")->required()->check(CLI::ExistingFile);
    add_common(metrics);

    auto* diversity = app.add_subcommand("diversity", "Cosine similarity among score files");
    diversity->add_option("inputs", inputs, "Score CSV files")->required()->check(CLI::ExistingFile);
    add_common(diversity);

    CLI11_PARSE(app, argc, argv);

    const std::vector<fs::path> paths(inputs.begin(), inputs.end());
    try {
        if (augment->parsed()) return cli::cmd_augment(config_for(config_path, seed, out), std::cerr);
        if (demo->parsed()) return cli::cmd_demo(config_for(config_path, seed, out), std::cout, std::cerr);
        if (fuse->parsed()) {
            const auto r = rule == "average" ? ensemble::FusionRule::average : ensemble::FusionRule::sum;
            return cli::cmd_fuse(paths, out, r, std::cerr);
        }
        if (metrics->parsed()) return cli::cmd_metrics(paths, manifest, out, std::cout, std::cerr);
        if (diversity->parsed()) return cli::cmd_diversity(paths, out, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
