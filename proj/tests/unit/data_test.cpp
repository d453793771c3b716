#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "augens/augment/spec.hpp"
#include "augens/data/dataset.hpp"
#include "augens/error.hpp"
#include "augens/image_io.hpp"
#include "oracles.hpp"

using namespace augens;
using namespace augens::data;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("augens_data_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string manifest_text(const DatasetManifest& m) {
    std::ostringstream os;
    write_manifest(m, os);
    return os.str();
}

DatasetManifest blob_manifest(std::size_t classes, std::size_t per_class, double (*value)(std::size_t, std::size_t),
                              std::size_t size = 24, std::size_t channels = 3) {
    DatasetManifest m;
    m.root = "mem";
    for (std::size_t c = 0; c < classes; ++c) {
        m.classes.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < per_class; ++i) {
            Sample s;
            s.id = "c" + std::to_string(c) + "/" + std::to_string(i);
            s.relative_path = s.id + ".png";
            s.label = static_cast<int>(c);
            s.blob = std::make_shared<Image>(size, size, channels, value(c, i));
            m.samples.push_back(s);
        }
    }
    return m;
}

augment::AugmentationSpec spec(int app_id, std::uint64_t seed = 3) {
    augment::AugmentationSpec s;
    s.app_id = app_id;
    s.seed = seed;
    return s;
}

std::vector<std::size_t> fold_sizes(const DatasetManifest& m, int label, std::size_t k) {
    std::vector<std::size_t> sizes(k);
    for (const auto& s : m.samples) {
        if (s.label == label && s.origin == Origin::original) ++sizes[static_cast<std::size_t>(s.fold)];
    }
    return sizes;
}

}  // namespace

TEST_CASE("scan_directory layout, idempotence and errors") {
    const fs::path root = fresh_dir("scan");
    Rng rng(1);
    for (const char* cls : {"beta", "alpha"}) {
        fs::create_directories(root / cls);
        for (int i = 0; i < 3; ++i) {
            save_image(oracle::random_image(rng, 8, 8, 3), root / cls / ("img" + std::to_string(i) + ".png"));
        }
    }
    std::ofstream(root / "alpha" / "broken.png") << "not an image";
    std::ofstream(root / "alpha" / "readme.txt") << "ignored";

    const DatasetManifest m = scan_directory(root);
    CHECK(m.samples.size() == 6);
    REQUIRE(m.classes.size() == 2);
    CHECK(m.classes[0] == "alpha");
    CHECK(m.classes[1] == "beta");
    CHECK(m.samples.front().id == "alpha/img0");
    CHECK(m.samples.front().label == 0);
    CHECK(m.samples.back().relative_path == "beta/img2.png");
    CHECK(m.samples.back().label == 1);
    REQUIRE(m.notes.size() == 1);
    CHECK(m.notes[0].find("alpha/broken.png") != std::string::npos);
    CHECK(manifest_text(scan_directory(root)) == manifest_text(m));
    CHECK(load_sample(m, m.samples[0]).height() == 8);

    const fs::path one = fresh_dir("scan_one");
    fs::create_directories(one / "only");
    save_image(oracle::random_image(rng, 8, 8, 3), one / "only" / "a.png");
    CHECK_THROWS_AS(scan_directory(one), Error);
    CHECK_THROWS_AS(scan_directory(one / "missing"), Error);
    fs::remove_all(root);
    fs::remove_all(one);
}

TEST_CASE("stratified folds") {
    DatasetManifest m = blob_manifest(2, 10, [](std::size_t, std::size_t) { return 0.5; });
    assign_folds(m, 5, 9);
    for (int c = 0; c < 2; ++c) CHECK(fold_sizes(m, c, 5) == std::vector<std::size_t>(5, 2));

    DatasetManifest odd = blob_manifest(1, 7, [](std::size_t, std::size_t) { return 0.5; });
    odd.classes.push_back("c1");
    for (int i = 0; i < 6; ++i) {
        Sample s;
        s.id = "c1/" + std::to_string(i);
        s.label = 1;
        s.blob = std::make_shared<Image>(4, 4, 3, 0.1);
        odd.samples.push_back(s);
    }
    assign_folds(odd, 5, 2);
    auto sizes = fold_sizes(odd, 0, 5);
    std::sort(sizes.rbegin(), sizes.rend());
    CHECK(sizes == std::vector<std::size_t>{2, 2, 1, 1, 1});

    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const std::size_t classes = 2 + rng.index(4), k = 2 + rng.index(9);
        DatasetManifest r;
        for (std::size_t c = 0; c < classes; ++c) {
            r.classes.push_back("c" + std::to_string(c));
            const std::size_t n = k + rng.index(20);
            for (std::size_t i = 0; i < n; ++i) {
                Sample s;
                s.id = r.classes.back() + "/" + std::to_string(i);
                s.label = static_cast<int>(c);
                r.samples.push_back(s);
            }
        }
        const std::uint64_t seed = rng.next_u64();
        const auto folds = stratified_folds(r, k, seed);
        CHECK(folds == stratified_folds(r, k, seed));
        for (int f : folds) {
            CHECK(f >= 0);
            CHECK(f < static_cast<int>(k));
        }
        for (std::size_t i = 0; i < folds.size(); ++i) r.samples[i].fold = folds[i];
        for (std::size_t c = 0; c < classes; ++c) {
            const auto s = fold_sizes(r, static_cast<int>(c), k);
            CHECK(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()) <= 1);
        }
    }

    DatasetManifest small = blob_manifest(2, 3, [](std::size_t, std::size_t) { return 0.5; });
    CHECK_THROWS_AS(stratified_folds(small, 5, 1), Error);
}

TEST_CASE("sample_companions") {
    DatasetManifest m = blob_manifest(3, 6, [](std::size_t, std::size_t) { return 0.5; });
    std::vector<std::size_t> pool(m.samples.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});

    Rng rng(4);
    for (std::size_t who = 0; who < m.samples.size(); ++who) {
        const auto picks = sample_companions(m, who, 3, 2, rng, pool);
        REQUIRE(picks.size() == 5);
        std::set<std::size_t> unique(picks.begin(), picks.end());
        CHECK(unique.size() == 5);
        CHECK(unique.count(who) == 0);
        for (std::size_t j = 0; j < 3; ++j) CHECK(m.samples[picks[j]].label == m.samples[who].label);
        for (std::size_t j = 3; j < 5; ++j) CHECK(m.samples[picks[j]].label != m.samples[who].label);
    }

    // Exactly n_same + 1 class members in the pool: the other five are returned.
    const auto five = sample_companions(m, 0, 5, 0, rng, pool);
    std::set<std::size_t> got(five.begin(), five.end());
    CHECK(got == std::set<std::size_t>{1, 2, 3, 4, 5});

    try {
        sample_companions(m, 0, 6, 0, rng, pool);
        FAIL("expected insufficient pool");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_pool);
        CHECK(std::string(e.what()).find("'c0'") != std::string::npos);
    }
}

TEST_CASE("synthetic generator") {
    SyntheticSpec s;
    s.seed = 5;
    const DatasetManifest m = make_synthetic(s);
    CHECK(m.samples.size() == 60);
    CHECK(m.class_count() == 3);
    validate(m);

    SyntheticSpec quiet = s;
    quiet.noise_level = 0.0;
    const DatasetManifest q = make_synthetic(quiet);
    for (const auto& sample : q.samples) {
        const auto& first = q.samples[static_cast<std::size_t>(sample.label) * quiet.samples_per_class];
        CHECK(*sample.blob == *first.blob);
    }
    CHECK(*q.samples[0].blob != *q.samples[20].blob);

    SyntheticSpec other = s;
    other.seed = 6;
    const DatasetManifest o = make_synthetic(other);
    bool differs = false;
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        CHECK(o.samples[i].label == m.samples[i].label);
        differs |= *o.samples[i].blob != *m.samples[i].blob;
    }
    CHECK(differs);
    CHECK(manifest_text(make_synthetic(s)) == manifest_text(m));

    SyntheticSpec gray = s;
    gray.channels = 1;
    CHECK(is_grayscale_dataset(make_synthetic(gray)));
    CHECK_FALSE(is_grayscale_dataset(m));

    SyntheticSpec bad = s;
    bad.n_classes = 1;
    CHECK_THROWS_AS(make_synthetic(bad), Error);
    bad = s;
    bad.image_size = 8;
    CHECK_THROWS_AS(make_synthetic(bad), Error);
}

TEST_CASE("manifest text round trip") {
    SyntheticSpec s;
    s.samples_per_class = 5;
    DatasetManifest m = make_synthetic(s);
    m.samples[3].group = "g1";
    m.samples[4].group = "g1";
    m.notes.push_back("a note");
    const std::string text = manifest_text(m);
    std::istringstream is(text);
    const DatasetManifest back = read_manifest(is, m.root);
    CHECK(back.classes == m.classes);
    CHECK(back.notes == m.notes);
    CHECK(back.protocol.k == m.protocol.k);
    REQUIRE(back.samples.size() == m.samples.size());
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        CHECK(back.samples[i].id == m.samples[i].id);
        CHECK(back.samples[i].relative_path == m.samples[i].relative_path);
        CHECK(back.samples[i].label == m.samples[i].label);
        CHECK(back.samples[i].fold == m.samples[i].fold);
        CHECK(back.samples[i].group == m.samples[i].group);
    }
    CHECK(manifest_text(back) == text);

    std::istringstream bad("a\tb\tc\n");
    CHECK_THROWS_AS(read_manifest(bad, "."), Error);
}

TEST_CASE("export of ten originals with APP1") {
    const fs::path out = fresh_dir("export");
    DatasetManifest m = blob_manifest(2, 5, [](std::size_t c, std::size_t i) { return 0.1 * c + 0.05 * i; });
    const std::vector<augment::AugmentationSpec> specs{spec(1)};
    const DatasetManifest e = export_augmented(m, specs, out);
    CHECK(e.samples.size() == 40);
    std::size_t augmented = 0;
    for (const auto& s : e.samples) {
        if (s.origin != Origin::augmented) continue;
        ++augmented;
        CHECK(s.app_id == 1);
        CHECK(fs::exists(out / s.relative_path));
        const Sample* parent = e.find(s.parent_id);
        REQUIRE(parent != nullptr);
        CHECK(parent->origin == Origin::original);
        CHECK(parent->label == s.label);
    }
    CHECK(augmented == 30);
    CHECK(manifest_text(export_augmented(m, specs, out)) == manifest_text(e));

    CHECK(manifest_text(export_augmented(m, {}, out)) == manifest_text(m));

    ExportOptions in_memory;
    in_memory.write_images = false;
    in_memory.tag = "mem/";
    const DatasetManifest e2 = export_augmented(m, specs, out, in_memory);
    CHECK(e2.samples.size() == 40);
    CHECK(e2.samples.back().blob != nullptr);
    CHECK(e2.samples.back().id.rfind("mem/app1/", 0) == 0);
    CHECK_FALSE(fs::exists(out / "mem"));
    fs::remove_all(out);
}

TEST_CASE("export skips color-only apps on grayscale data") {
    const fs::path out = fresh_dir("gray");
    DatasetManifest m = blob_manifest(2, 5, [](std::size_t c, std::size_t i) { return 0.2 + 0.1 * c + 0.01 * i; });
    const std::vector<augment::AugmentationSpec> specs{spec(7), spec(1)};
    ExportOptions o;
    o.write_images = false;
    const DatasetManifest e = export_augmented(m, specs, out, o);
    CHECK(e.samples.size() == 40);
    std::size_t notes = 0;
    for (const auto& n : e.notes) notes += n.find("skipped app7") != std::string::npos;
    CHECK(notes == 1);
    for (const auto& s : e.samples) {
        if (s.origin == Origin::augmented) CHECK(s.blob->channels() == 1);
    }
    fs::remove_all(out);
}

TEST_CASE("export never touches the held-out fold") {
    // Training images are black and held-out images white: any held-out
    // companion would leak brightness into an averaged DCT coefficient.
    const fs::path out = fresh_dir("leak");
    DatasetManifest m = blob_manifest(3, 10, [](std::size_t, std::size_t) { return 0.0; }, 16);
    assign_folds(m, 5, 21);
    for (auto& s : m.samples) {
        if (s.fold == 2) s.blob = std::make_shared<Image>(16, 16, 3, 1.0);
    }
    ExportOptions o;
    o.test_fold = 2;
    o.write_images = false;
    const std::vector<augment::AugmentationSpec> specs{spec(12), spec(5)};
    const DatasetManifest e = export_augmented(m, specs, out, o);
    const std::size_t train = training_pool(m, 2).size();
    CHECK(train == 24);
    CHECK(e.samples.size() == 30 + train * (5 + 3));
    for (const auto& s : e.samples) {
        if (s.origin != Origin::augmented) continue;
        CHECK(s.fold != 2);
        CHECK(e.find(s.parent_id)->fold == s.fold);
        for (double v : s.blob->data()) CHECK(v == 0.0);
    }
    fs::remove_all(out);
}

TEST_CASE("shared PCA basis") {
    DatasetManifest m = blob_manifest(2, 6, [](std::size_t c, std::size_t i) { return 0.1 * c + 0.07 * i; }, 16);
    Rng rng(8);
    for (auto& s : m.samples) s.blob = std::make_shared<Image>(oracle::random_image(rng, 16, 16, 3));
    const auto pool = training_pool(m, -1);
    augment::AppParams p;
    const auto basis = fit_shared_pca(m, pool, p, 1);
    CHECK(basis->dim == 256);
    CHECK(basis->count == std::min<std::size_t>(64, 36 - 1));

    p.pca_fit_cap = 4;
    CHECK(fit_shared_pca(m, pool, p, 1)->count == 11);
    CHECK(fit_shared_pca(m, pool, p, 1)->components == fit_shared_pca(m, pool, p, 1)->components);
}

TEST_CASE("validate catches broken provenance") {
    DatasetManifest m = blob_manifest(2, 2, [](std::size_t, std::size_t) { return 0.5; });
    Sample orphan;
    orphan.id = "x";
    orphan.origin = Origin::augmented;
    orphan.app_id = 1;
    orphan.parent_id = "nope";
    m.samples.push_back(orphan);
    CHECK_THROWS_AS(validate(m), Error);
    m.samples.back().parent_id = "c1/0";
    CHECK_THROWS_AS(validate(m), Error);
    m.samples.back().label = 1;
    validate(m);
    m.samples.back().id = "c1/0";
    CHECK_THROWS_AS(validate(m), Error);
}
