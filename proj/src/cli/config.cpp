#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "augens/augment/apps.hpp"
#include "augens/cli/config.hpp"
#include "augens/error.hpp"

namespace augens::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    require(ec == std::errc() && p == v.data() + v.size(), ErrorCode::parse,
            "'" + key + "' expects a non-negative integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    require(ec == std::errc() && p == v.data() + v.size(), ErrorCode::parse,
            "'" + key + "' expects an integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    require(ec == std::errc() && p == v.data() + v.size(), ErrorCode::parse,
            "'" + key + "' expects a number, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(ErrorCode::parse, "'" + key + "' expects true or false, got '" + v + "'");
}

using Section = std::vector<std::pair<std::string, std::string>>;

void apply_top(RunConfig& c, const std::string& k, const std::string& v) {
    if (k == "seed") c.seed = to_u64(k, v);
    else if (k == "out") c.out = v;
    else if (k == "workers") c.workers = to_u64(k, v);
    else if (k == "save_images") c.save_images = to_bool(k, v);
    else if (k == "test_fold") c.test_fold = to_int(k, v);
    else if (k == "toy_iterations") c.toy.iterations = to_u64(k, v);
    else if (k == "toy_l2") c.toy.l2 = to_double(k, v);
    else if (k == "toy_downsample") c.toy.downsample = to_u64(k, v);
    else fail(ErrorCode::parse, "unknown top-level key '" + k + "'");
}

DatasetConfig make_dataset(const Section& s) {
    DatasetConfig d;
    for (const auto& [k, v] : s) {
        if (k == "source") {
            if (v == "synthetic") d.source = DatasetConfig::Source::synthetic;
            else if (v == "directory") d.source = DatasetConfig::Source::directory;
            else if (v == "manifest") d.source = DatasetConfig::Source::manifest;
            else fail(ErrorCode::parse, "unknown dataset source '" + v + "'");
        } else if (k == "path") d.path = v;
        else if (k == "folds") d.folds = to_u64(k, v);
        else if (k == "n_classes") d.synthetic.n_classes = to_u64(k, v);
        else if (k == "samples_per_class") d.synthetic.samples_per_class = to_u64(k, v);
        else if (k == "image_size") d.synthetic.image_size = to_u64(k, v);
        else if (k == "noise_level") d.synthetic.noise_level = to_double(k, v);
        else if (k == "channels") d.synthetic.channels = to_u64(k, v);
        else fail(ErrorCode::parse, "unknown [dataset] key '" + k + "'");
    }
    require(d.source == DatasetConfig::Source::synthetic || !d.path.empty(), ErrorCode::parse,
            "[dataset] needs a path for this source");
    return d;
}

AppEntry make_app(const Section& s) {
    AppEntry a;
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : s) {
        if (k == "backend") {
            require(v == "dct" || v == "haar", ErrorCode::parse, "unknown backend '" + v + "' (dct or haar)");
            a.backend = v;
            continue;
        }
        if (k == "seed") a.seed = to_u64(k, v);
        require(kv.emplace(k, v).second, ErrorCode::parse, "[app] repeats key '" + k + "'");
    }
    require(kv.count("id") == 1, ErrorCode::parse, "[app] needs an id");
    a.spec = augment::from_key_values(kv);
    require(a.spec.replicates >= 1, ErrorCode::parse, "replicates must be >= 1");
    return a;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string item = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

EnsembleEntry make_ensemble(const Section& s) {
    EnsembleEntry e;
    for (const auto& [k, v] : s) {
        if (k == "name") e.name = v;
        else if (k == "preset") e.preset = v;
        else if (k == "x") e.x = to_u64(k, v);
        else if (k == "members") e.members = split_list(v);
        else if (k == "rule") {
            if (v == "sum") e.rule = ensemble::FusionRule::sum;
            else if (v == "average") e.rule = ensemble::FusionRule::average;
            else fail(ErrorCode::parse, "unknown fusion rule '" + v + "'");
        } else if (k == "grouping") e.grouping = to_bool(k, v);
        else fail(ErrorCode::parse, "unknown [ensemble] key '" + k + "'");
    }
    require(e.preset.empty() || e.members.empty(), ErrorCode::parse, "[ensemble] takes a preset or members, not both");
    require(!e.preset.empty() || !e.members.empty(), ErrorCode::parse, "[ensemble] needs a preset or members");
    if (e.name.empty()) e.name = e.preset == "Ens_Base" ? "Ens_Base(" + std::to_string(e.x) + ")" : e.preset;
    require(!e.name.empty(), ErrorCode::parse, "[ensemble] needs a name");
    return e;
}

}  // namespace

RunConfig parse_config(std::istream& is) {
    RunConfig c;
    std::string section;
    Section current;
    bool have_dataset = false;
    auto flush = [&] {
        if (section == "dataset") {
            require(!have_dataset, ErrorCode::parse, "only one [dataset] section is allowed");
            c.dataset = make_dataset(current);
            have_dataset = true;
        } else if (section == "app") {
            c.apps.push_back(make_app(current));
        } else if (section == "ensemble") {
            c.ensembles.push_back(make_ensemble(current));
        }
        current.clear();
    };
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', ErrorCode::parse, "line " + std::to_string(lineno) + ": bad section header");
            flush();
            section = trim(line.substr(1, line.size() - 2));
            require(section == "dataset" || section == "app" || section == "ensemble", ErrorCode::parse,
                    "line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorCode::parse, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), ErrorCode::parse, "line " + std::to_string(lineno) + ": empty key");
        try {
            if (section.empty()) apply_top(c, key, value);
            else current.emplace_back(key, value);
        } catch (const Error& e) {
            const std::string what = e.what();
            const std::string prefix = std::string(to_string(e.code())) + ": ";
            throw Error(e.code(), "line " + std::to_string(lineno) + ": " + what.substr(prefix.size()));
        }
    }
    flush();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorCode::io, "cannot open config " + path.string());
    return parse_config(is);
}

std::vector<augment::AugmentationSpec> resolved_specs(const RunConfig& config) {
    std::vector<augment::AugmentationSpec> out;
    for (const auto& a : config.apps) {
        augment::AugmentationSpec spec = a.spec;
        spec.seed = a.seed ? *a.seed : derive_seed({config.seed, static_cast<std::uint64_t>(spec.app_id)});
        if (a.backend == "dct") spec.transform_backend = std::make_shared<augment::DctTransform>();
        if (a.backend == "haar") spec.transform_backend = std::make_shared<augment::HaarTransform>();
        augment::validate(spec);
        out.push_back(std::move(spec));
    }
    return out;
}

std::string run_tag(int app_id, std::size_t run) {
    return "app" + std::to_string(app_id) + "-run" + std::to_string(run);
}

augment::AugmentationSpec replicate_spec(const augment::AugmentationSpec& spec, std::size_t run) {
    require(run >= 1, ErrorCode::invalid_argument, "replicate runs are 1-based");
    augment::AugmentationSpec r = spec;
    if (run > 1) r.seed = derive_seed({spec.seed, run - 1});
    return r;
}

std::vector<ensemble::EnsembleDef> resolved_ensembles(const RunConfig& config) {
    std::map<int, std::size_t> replicates;
    for (const auto& a : config.apps) {
        auto& r = replicates[a.spec.app_id];
        r = std::max(r, a.spec.replicates);
    }
    auto runs_of = [&](int lo, int hi, std::size_t runs) {
        std::vector<std::string> tags;
        for (std::size_t run = 1; run <= runs; ++run) {
            for (int id = lo; id <= hi; ++id) {
                auto it = replicates.find(id);
                if (it != replicates.end() && it->second >= run) tags.push_back(run_tag(id, run));
            }
        }
        return tags;
    };

    std::vector<EnsembleEntry> entries = config.ensembles;
    const bool defaults = entries.empty();
    if (defaults) {
        const std::size_t base_x = replicates.count(3) ? replicates[3] : 0;
        entries.push_back({"EnsDA_A", "EnsDA_A", 0, {}, ensemble::FusionRule::sum, false});
        entries.push_back({"EnsDA_B", "EnsDA_B", 0, {}, ensemble::FusionRule::sum, false});
        entries.push_back({"EnsDA_C", "EnsDA_C", 0, {}, ensemble::FusionRule::sum, false});
        if (base_x > 0) {
            entries.push_back({"Ens_Base(" + std::to_string(base_x) + ")", "Ens_Base", base_x, {},
                               ensemble::FusionRule::sum, false});
        }
    }
    std::vector<ensemble::EnsembleDef> out;
    for (const auto& e : entries) {
        ensemble::EnsembleDef def;
        def.name = e.name;
        def.rule = e.rule;
        def.grouping = e.grouping;
        if (e.preset.empty()) {
            def.member_tags = e.members;
        } else if (e.preset == "EnsDA_A") {
            def.member_tags = runs_of(1, 11, 1);
        } else if (e.preset == "EnsDA_B") {
            def.member_tags = runs_of(1, 14, 1);
        } else if (e.preset == "EnsDA_C") {
            def.member_tags = runs_of(1, 14, 2);
        } else if (e.preset == "Ens_Base") {
            require(e.x >= 1, ErrorCode::parse, "Ens_Base needs x >= 1");
            require(replicates.count(3) && replicates[3] >= e.x, ErrorCode::parse,
                    "Ens_Base(" + std::to_string(e.x) + ") needs APP3 with at least that many replicates");
            for (std::size_t run = 1; run <= e.x; ++run) def.member_tags.push_back(run_tag(3, run));
        } else {
            fail(ErrorCode::parse, "unknown ensemble preset '" + e.preset + "'");
        }
        if (def.member_tags.empty()) {
            require(defaults, ErrorCode::parse, "ensemble '" + def.name + "' has no members among the configured apps");
            continue;
        }
        out.push_back(std::move(def));
    }
    return out;
}

}  // namespace augens::cli
