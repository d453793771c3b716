#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "augens/cli/commands.hpp"
#include "augens/cli/config.hpp"
#include "augens/data/dataset.hpp"
#include "augens/ensemble/scores.hpp"
#include "augens/error.hpp"

using namespace augens;
using namespace augens::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

std::string parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("augens_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

const char* kSmall = R"(
seed = 5
[dataset]
source = synthetic
n_classes = 2
samples_per_class = 5
image_size = 16
folds = 5
[app]
id = 1
)";

std::size_t count_files(const fs::path& root, const std::string& ext) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ext) ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse(R"(
# top level
seed = 7
out = some/where
workers = 2
save_images = true
[dataset]
source = synthetic
n_classes = 4
samples_per_class = 6
[app]
id = 3
replicates = 3
[app]
id = 11
backend = haar
seed = 99
[ensemble]
name = pair
members = app3-run1, app11-run1
rule = average
)");
    CHECK(c.seed == 7);
    CHECK(c.out == fs::path("some/where"));
    CHECK(c.workers == 2);
    CHECK(c.save_images);
    CHECK(c.dataset.synthetic.n_classes == 4);
    REQUIRE(c.apps.size() == 2);
    CHECK(c.apps[0].spec.replicates == 3);
    CHECK(c.apps[1].backend == "haar");
    CHECK(c.apps[1].seed == 99u);
    REQUIRE(c.ensembles.size() == 1);
    CHECK(c.ensembles[0].members == std::vector<std::string>{"app3-run1", "app11-run1"});
    CHECK(c.ensembles[0].rule == ensemble::FusionRule::average);

    const auto specs = resolved_specs(c);
    REQUIRE(specs.size() == 2);
    CHECK(specs[1].seed == 99u);
    CHECK(specs[0].seed == resolved_specs(c)[0].seed);
    CHECK(run_tag(3, 2) == "app3-run2");
    CHECK(replicate_spec(specs[0], 1).seed == specs[0].seed);
    CHECK(replicate_spec(specs[0], 2).seed != specs[0].seed);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(parse_error("seed = 1\n[nope]\n").find("line 2") != std::string::npos);
    CHECK(parse_error("seed = 1\njunk\n").find("line 2: expected key = value") != std::string::npos);
    CHECK(parse_error("[dataset\n").find("line 1") != std::string::npos);
    CHECK(parse_error("seed = x\n").find("line 1") != std::string::npos);
    CHECK(parse_error("[ensemble]\n").find("parse") == 0);
    CHECK(parse_error("[ensemble]\npreset = EnsDA_A\nmembers = a\n").find("not both") != std::string::npos);
}

TEST_CASE("ensemble presets") {
    std::string text = "[dataset]\nsource = synthetic\n";
    for (int id = 1; id <= 14; ++id)
        text += "[app]\nid = " + std::to_string(id) + "\nreplicates = " + (id == 3 ? "4" : "2") + "\n";
    const RunConfig c = parse(text);
    const auto defs = resolved_ensembles(c);
    REQUIRE(defs.size() == 4);
    CHECK(defs[0].name == "EnsDA_A");
    CHECK(defs[0].member_tags.size() == 11);
    CHECK(defs[1].member_tags.size() == 14);
    CHECK(defs[2].member_tags.size() == 28);
    CHECK(defs[3].name == "Ens_Base(4)");
    CHECK(defs[3].member_tags == std::vector<std::string>{"app3-run1", "app3-run2", "app3-run3", "app3-run4"});

    std::vector<std::string> b = defs[0].member_tags;
    for (int id = 12; id <= 14; ++id) b.push_back(run_tag(id, 1));
    CHECK(defs[1].member_tags == b);
    for (const auto& t : defs[0].member_tags) CHECK(t.find("-run1") != std::string::npos);

    CHECK_THROWS_AS(resolved_ensembles(parse(text + "[ensemble]\npreset = Ens_Base\nx = 5\n")), Error);
    CHECK_THROWS_AS(resolved_ensembles(parse(text + "[ensemble]\npreset = Mystery\n")), Error);
    const auto one = resolved_ensembles(parse("[app]\nid = 12\n[ensemble]\npreset = EnsDA_B\n"));
    REQUIRE(one.size() == 1);
    CHECK(one[0].member_tags == std::vector<std::string>{"app12-run1"});
}

TEST_CASE("augment command writes manifests deterministically") {
    RunConfig c = parse(kSmall);
    c.out = scratch("augment");
    std::ostringstream log;
    REQUIRE(cmd_augment(c, log) == 0);
    const fs::path manifest = c.out / "manifest_app1.tsv";
    REQUIRE(fs::exists(manifest));
    const auto m = data::read_manifest(manifest);
    CHECK(m.samples.size() == 40);
    CHECK(count_files(c.out, ".png") == 40);
    data::validate(m);
    const std::string first = slurp(manifest);

    std::ostringstream again;
    REQUIRE(cmd_augment(c, again) == 0);
    CHECK(slurp(manifest) == first);
    fs::remove_all(c.out);
}

TEST_CASE("APP11 without a backend fails cleanly") {
    RunConfig c = parse(std::string(kSmall) + "[app]\nid = 11\n");
    c.dataset.synthetic.samples_per_class = 10;
    c.out = scratch("app11");
    std::ostringstream log;
    CHECK(cmd_augment(c, log) != 0);
    CHECK(log.str().find("unsupported") != std::string::npos);
    fs::remove_all(c.out);
}

TEST_CASE("demo, fuse, metrics and diversity on a small run") {
    RunConfig c = parse(R"(
seed = 3
[dataset]
source = synthetic
n_classes = 3
samples_per_class = 5
image_size = 16
folds = 5
[app]
id = 2
replicates = 2
[app]
id = 3
replicates = 2
[app]
id = 12
)");
    c.out = scratch("demo");
    std::ostringstream report, log;
    REQUIRE(cmd_demo(c, report, log) == 0);
    const std::string table = report.str();
    CHECK(table.rfind("row\tmembers\taccuracy\teuc\n", 0) == 0);
    for (const char* row : {"NoDA", "EnsDA_A", "EnsDA_B", "EnsDA_C", "Ens_Base(2)"})
        CHECK(table.find(std::string("\n") + row + "\t") != std::string::npos);
    for (const char* f : {"metrics.tsv", "diversity.tsv", "wilcoxon.tsv", "manifest.tsv"})
        CHECK(fs::exists(c.out / f));

    std::istringstream div(slurp(c.out / "diversity.tsv"));
    std::string line;
    std::getline(div, line);
    std::size_t row = 0;
    while (std::getline(div, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, '\t');
        for (std::size_t col = 0; std::getline(cells, cell, '\t'); ++col)
            if (col == row) CHECK(std::stod(cell) == doctest::Approx(1.0).epsilon(1e-6));
        ++row;
    }
    CHECK(row == 5);

    const std::vector<fs::path> inputs{c.out / "scores" / "app3-run1.csv", c.out / "scores" / "app3-run2.csv"};
    REQUIRE(fs::exists(inputs[0]));
    std::ostringstream flog;
    REQUIRE(cmd_fuse(inputs, c.out / "fused.csv", ensemble::FusionRule::sum, flog) == 0);
    const auto fused = ensemble::read_scores(c.out / "fused.csv");
    const auto a = ensemble::read_scores(inputs[0]), b = ensemble::read_scores(inputs[1]);
    for (std::size_t i = 0; i < fused.scores.size(); ++i) CHECK(fused.scores[i] == a.scores[i] + b.scores[i]);

    std::ostringstream mreport, mlog;
    REQUIRE(cmd_metrics(inputs, c.out / "manifest.tsv", c.out / "m.tsv", mreport, mlog) == 0);
    CHECK(mreport.str().rfind("tag\taccuracy\teuc\tauc_0\tauc_1\tauc_2\n", 0) == 0);

    std::ostringstream dreport, dlog;
    REQUIRE(cmd_diversity(inputs, c.out / "d.tsv", dreport, dlog) == 0);
    CHECK(fs::exists(c.out / "d.tsv"));

    std::ostringstream bad;
    CHECK(cmd_fuse({c.out / "missing.csv"}, c.out / "x.csv", ensemble::FusionRule::sum, bad) != 0);

    RunConfig again = c;
    std::ostringstream report2, log2;
    REQUIRE(cmd_demo(again, report2, log2) == 0);
    CHECK(report2.str() == table);
    fs::remove_all(c.out);
}

TEST_CASE("demo config loads") {
    const RunConfig c = load_config(AUGENS_DEMO_CONFIG);
    CHECK(c.apps.size() == 14);
    CHECK(resolved_ensembles(c).size() == 4);
    CHECK_THROWS_AS(load_config("/nonexistent/augens.cfg"), Error);
}

#ifdef AUGENS_CLI_PATH
TEST_CASE("command line binary") {
    const fs::path dir = scratch("binary");
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "run.cfg");
        os << kSmall;
    }
    const std::string cli = AUGENS_CLI_PATH;
    const std::string base = "\"" + cli + "\" augment --config \"" + (dir / "run.cfg").string() + "\" --seed 9 --out \"";
    CHECK(std::system((base + (dir / "a").string() + "\" > /dev/null 2>&1").c_str()) == 0);
    CHECK(std::system((base + (dir / "b").string() + "\" > /dev/null 2>&1").c_str()) == 0);
    const std::string left = slurp(dir / "a" / "manifest_app1.tsv");
    CHECK_FALSE(left.empty());
    CHECK(count_files(dir / "a", ".png") == 40);
    CHECK(std::system(("\"" + cli + "\" bogus > /dev/null 2>&1").c_str()) != 0);
    fs::remove_all(dir);
}
#endif
