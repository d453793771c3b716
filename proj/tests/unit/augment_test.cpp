#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augens/augment/elastic.hpp"
#include "augens/augment/geometric.hpp"
#include "augens/augment/perturb.hpp"
#include "augens/augment/photometric.hpp"
#include "augens/color.hpp"
#include "augens/error.hpp"
#include "augens/spectral/filter.hpp"
#include "oracles.hpp"

using namespace augens;
using namespace augens::augment;

namespace {

Image ramp(std::size_t h, std::size_t w, std::size_t c = 1) {
    Image img(h, w, c);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t k = 0; k < c; ++k) img.at(y, x, k) = (x + 0.5 * y + 0.1 * k) / (w + h);
    return img;
}

Image solid(double r, double g, double b, std::size_t h = 4, std::size_t w = 4) {
    Image img(h, w, 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data()[3 * i] = r;
        img.data()[3 * i + 1] = g;
        img.data()[3 * i + 2] = b;
    }
    return img;
}

CoefficientSet random_set(Rng& rng, std::size_t rows, std::size_t cols, std::size_t arrays = 1) {
    CoefficientSet s;
    for (std::size_t a = 0; a < arrays; ++a) s.push_back(oracle::random_plane(rng, rows, cols));
    return s;
}

std::vector<double> sorted_channel(const Image& img, std::size_t c) {
    std::vector<double> v;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) v.push_back(img.data()[i * img.channels() + c]);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("geometric identity, involution and translation") {
    Rng rng(1);
    const Image img = oracle::random_image(rng, 10, 12, 3);
    CHECK(geometric_transform(img, GeometricParams{}) == img);

    GeometricParams lr;
    lr.reflect_lr = true;
    CHECK(lr.is_reflection_only());
    CHECK(geometric_transform(geometric_transform(img, lr), lr) == img);
    CHECK(flip_tb(flip_tb(img)) == img);
    CHECK(flip_lr(img).at(3, 0, 1) == img.at(3, 11, 1));

    const Image r = ramp(8, 10);
    GeometricParams t;
    t.translate_x = 3.0;
    const Image shifted = geometric_transform(r, t);
    for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 10; ++x) {
            const std::size_t src = x >= 3 ? x - 3 : 0;
            CHECK(shifted.at(y, x, 0) == doctest::Approx(r.at(y, src, 0)).epsilon(1e-12));
        }
    }

    GeometricParams bad;
    bad.rotation_deg = 11.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = {};
    bad.scale_x = 0.5;
    CHECK_THROWS_AS(geometric_transform(img, bad), Error);
}

TEST_CASE("geometric outputs keep dims and range") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const Image img = oracle::random_image(rng, 9 + rng.index(8), 9 + rng.index(8), 3);
        GeometricParams p;
        p.scale_x = rng.uniform(1, 2);
        p.scale_y = rng.uniform(1, 2);
        p.rotation_deg = rng.uniform(-10, 10);
        p.translate_x = rng.uniform(0, 5);
        p.shear_y_deg = rng.uniform(0, 30);
        const Image out = geometric_transform(img, p);
        CHECK(out.same_shape(img));
        for (double v : out.data()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("perturb_coefficients no-op cases") {
    Rng rng(3);
    const CoefficientSet c = random_set(rng, 6, 6, 2);
    std::vector<CoefficientSet> comps;
    for (int i = 0; i < 5; ++i) comps.push_back(random_set(rng, 6, 6, 2));

    Rng r1(9);
    CHECK(perturb_coefficients(c, PerturbationMode::swap(0.0), comps, r1, false) == c);
    Rng r2(9);
    CHECK(perturb_coefficients(c, PerturbationMode::zero(0.0), {}, r2, false) == c);

    const CoefficientSet flat{Plane(4, 4, 0.3)};
    Rng r3(9);
    CHECK(perturb_coefficients(flat, PerturbationMode::noise(), {}, r3, false) == flat);

    Rng r4(9);
    CHECK_THROWS_AS(perturb_coefficients(c, PerturbationMode::swap(), std::span(comps).first(4), r4, false), Error);
    Rng r5(9);
    try {
        perturb_coefficients(c, PerturbationMode::swap(), {}, r5, false);
        FAIL("swap without companions must throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::companion_count);
    }
    Rng r6(9);
    CHECK_THROWS_AS(perturb_coefficients(c, PerturbationMode::zero(1.5), {}, r6, false), Error);
}

TEST_CASE("perturb_coefficients zero fraction stays in the binomial band") {
    // 10 000 elements at p = 0.5: sd = 50, so [4800, 5200] is a 4-sigma band.
    const CoefficientSet c{Plane(100, 100, 1.0)};
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed({77, trial}));
        PerturbationStats stats;
        const CoefficientSet out = perturb_coefficients(c, PerturbationMode::zero(0.5), {}, rng, false,
                                                        NoiseRule::coefficient_std(), &stats);
        const auto zeros = static_cast<std::size_t>(std::count(out[0].values.begin(), out[0].values.end(), 0.0));
        CHECK(stats.total == 10000);
        CHECK(stats.selected == zeros);
        CHECK(zeros >= 4800);
        CHECK(zeros <= 5200);
    }
}

TEST_CASE("perturb_coefficients swap copies companion entries and protects DC") {
    Rng rng(4);
    const CoefficientSet c = random_set(rng, 8, 8);
    std::vector<CoefficientSet> comps;
    for (int i = 0; i < 5; ++i) comps.push_back(random_set(rng, 8, 8));
    Rng r(5);
    const CoefficientSet out = perturb_coefficients(c, PerturbationMode::swap(0.5), comps, r, true);
    CHECK(out[0](0, 0) == c[0](0, 0));
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 64; ++i) {
        if (out[0].values[i] == c[0].values[i]) continue;
        ++changed;
        bool from_companion = false;
        for (const auto& comp : comps) from_companion |= comp[0].values[i] == out[0].values[i];
        CHECK(from_companion);
    }
    CHECK(changed > 10);

    Rng z(6);
    const CoefficientSet zeroed = perturb_coefficients(c, PerturbationMode::zero(1.0), {}, z, true);
    CHECK(zeroed[0](0, 0) == c[0](0, 0));
    for (std::size_t i = 1; i < 64; ++i) CHECK(zeroed[0].values[i] == 0.0);
}

TEST_CASE("perturb_coefficients noise rules") {
    Rng rng(7);
    const CoefficientSet c = random_set(rng, 10, 10);
    const double sd = stddev(c);
    Rng r(8);
    const CoefficientSet out = perturb_coefficients(c, PerturbationMode::noise(), {}, r, false);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(std::abs(out[0].values[i] - c[0].values[i]) <= 0.5 * sd + 1e-15);
    }

    Rng r2(8);
    const CoefficientSet off =
        perturb_coefficients(c, PerturbationMode::noise(), {}, r2, false, NoiseRule::offset(0.2, 0.5, 0.01));
    for (std::size_t i = 0; i < 100; ++i) {
        const double d = off[0].values[i] - c[0].values[i];
        CHECK(d >= 0.2 - 0.005 - 1e-15);
        CHECK(d <= 0.2 + 0.005 + 1e-15);
    }

    std::vector<double> v{1, 2, 3, 4};
    CHECK(stddev(v) == doctest::Approx(std::sqrt(1.25)));
}

TEST_CASE("contrast_rescale") {
    Rng rng(9);
    const Image img = oracle::random_image(rng, 5, 6, 3);
    CHECK(max_abs_diff(contrast_rescale(img, 0.0, 1.0), img) < 1e-15);
    const Image at_low = contrast_rescale(Image(4, 4, 1, 0.25), 0.25, 0.75);
    for (double v : at_low.data()) CHECK(v == 0.0);

    const Image r = ramp(6, 9);
    const Image out = contrast_rescale(r, 0.25, 0.75);
    for (std::size_t i = 0; i < r.data().size(); ++i) {
        const double expect = std::clamp((r.data()[i] - 0.25) / 0.5, 0.0, 1.0);
        CHECK(out.data()[i] == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK_THROWS_AS(contrast_rescale(img, 0.6, 0.5), Error);
}

TEST_CASE("sharpness residual") {
    const Image flat(8, 8, 3, 0.4);
    const Image hp = high_pass_residual(flat), sharp = sharpness_residual(flat);
    for (double v : hp.data()) CHECK(std::abs(v) < 1e-15);
    for (double v : sharp.data()) CHECK(v == 0.0);

    Image impulse(9, 9, 1);
    impulse.at(4, 4, 0) = 1.0;
    const Image res = high_pass_residual(impulse, 1.0);
    const Plane k = spectral::make_kernel(spectral::KernelKind::gaussian, 1.0);
    const long h = static_cast<long>(k.rows / 2);
    for (long y = 0; y < 9; ++y) {
        for (long x = 0; x < 9; ++x) {
            const long ky = y - 4 + h, kx = x - 4 + h;
            const bool inside = ky >= 0 && kx >= 0 && ky < static_cast<long>(k.rows) && kx < static_cast<long>(k.cols);
            const double expect = (y == 4 && x == 4 ? 1.0 : 0.0) - (inside ? k(ky, kx) : 0.0);
            CHECK(res.at(y, x, 0) == doctest::Approx(expect).epsilon(1e-14));
        }
    }

    Rng rng(10);
    for (int t = 0; t < 10; ++t) {
        const Image s = sharpness_residual(oracle::random_image(rng, 7, 7, 3));
        CHECK(*std::min_element(s.data().begin(), s.data().end()) == doctest::Approx(0.0));
        CHECK(*std::max_element(s.data().begin(), s.data().end()) == doctest::Approx(1.0));
    }
}

TEST_CASE("color_shift") {
    Rng rng(11);
    const Image img = oracle::random_image(rng, 4, 5, 3);
    CHECK(color_shift(img, {0, 0, 0}) == img);
    const Image saturated = color_shift(img, {255, 255, 255});
    for (double v : saturated.data()) CHECK(v == 1.0);
    const Image mid = color_shift(Image(3, 3, 3, 0.5), {10, 0, 0});
    CHECK(mid.at(1, 1, 0) == doctest::Approx(0.5 + 10.0 / 255.0).epsilon(1e-15));
    CHECK(mid.at(1, 1, 1) == 0.5);
    const Image gray = color_shift(Image(3, 3, 1, 0.5), {-10, 40, 40});
    CHECK(gray.at(0, 0, 0) == doctest::Approx(0.5 - 10.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("hsv_jitter") {
    Rng rng(12);
    const Image img = oracle::random_image(rng, 5, 5, 3);
    CHECK(max_abs_diff(hsv_jitter(img, HsvJitter{}), img) < 1e-12);

    const Image gray = solid(0.4, 0.4, 0.4);
    for (double hue : {0.05, 0.1, 0.15}) {
        HsvJitter j;
        j.hue = hue;
        CHECK(max_abs_diff(hsv_jitter(gray, j), gray) < 1e-12);
    }

    HsvJitter j;
    j.hue = 0.15;
    const Image shifted = rgb_to_hsv(hsv_jitter(solid(1, 0, 0), j));
    CHECK(shifted.at(0, 0, 0) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK_THROWS_AS(hsv_jitter(Image(4, 4, 1), j), Error);
}

TEST_CASE("histogram_specification on an 8-value channel") {
    Image src(2, 4, 1), tgt(2, 4, 1);
    const double s[8] = {0.3, 0.1, 0.4, 0.1, 0.5, 0.9, 0.2, 0.6};
    const double t[8] = {0.8, 0.0, 0.7, 0.25, 0.5, 0.125, 0.375, 1.0};
    for (std::size_t i = 0; i < 8; ++i) {
        src.data()[i] = s[i];
        tgt.data()[i] = t[i];
    }
    const Image out = histogram_specification(src, tgt);
    const double expect[8] = {0.375, 0.0, 0.5, 0.125, 0.7, 1.0, 0.25, 0.8};
    for (std::size_t i = 0; i < 8; ++i) CHECK(out.data()[i] == expect[i]);
}

TEST_CASE("histogram_specification properties") {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const Image img = oracle::random_image(rng, 6, 7, 3);
        const Image self = histogram_specification(img, img);
        for (std::size_t c = 0; c < 3; ++c) CHECK(sorted_channel(self, c) == sorted_channel(img, c));

        const Image target = oracle::random_image(rng, 5, 4, 3);
        const Image out = histogram_specification(img, target);
        for (std::size_t c = 0; c < 3; ++c) {
            const auto pool = sorted_channel(target, c);
            for (std::size_t i = 0; i < out.pixel_count(); ++i) {
                CHECK(std::binary_search(pool.begin(), pool.end(), out.data()[i * 3 + c]));
            }
            // Monotone: source order is preserved.
            for (std::size_t i = 0; i < img.pixel_count(); ++i) {
                for (std::size_t k = 0; k < img.pixel_count(); ++k) {
                    if (img.data()[i * 3 + c] < img.data()[k * 3 + c]) {
                        CHECK(out.data()[i * 3 + c] <= out.data()[k * 3 + c]);
                    }
                }
            }
        }
    }
    const Image constant = histogram_specification(oracle::random_image(rng, 4, 4, 3), Image(3, 3, 3, 0.2));
    for (double v : constant.data()) CHECK(v == 0.2);
}

TEST_CASE("reinhard normalization") {
    Rng rng(14);
    for (int t = 0; t < 10; ++t) {
        const Image img = oracle::random_image(rng, 6, 6, 3);
        CHECK(max_abs_diff(reinhard_normalize(img, img), img) < 1e-6);

        const Image target = oracle::random_image(rng, 5, 7, 3);
        const Image lab = reinhard_transfer_lab(rgb_to_lalphabeta(img), rgb_to_lalphabeta(target));
        const Image tlab = rgb_to_lalphabeta(target);
        for (std::size_t c = 0; c < 3; ++c) {
            double m = 0, mt = 0;
            for (std::size_t i = 0; i < lab.pixel_count(); ++i) m += lab.data()[i * 3 + c];
            for (std::size_t i = 0; i < tlab.pixel_count(); ++i) mt += tlab.data()[i * 3 + c];
            CHECK(std::abs(m / lab.pixel_count() - mt / tlab.pixel_count()) < 1e-6);
        }
    }
    // A flat source has zero spread in every channel: each takes the target mean.
    const Image target = oracle::random_image(rng, 4, 4, 3);
    const Image lab = reinhard_transfer_lab(rgb_to_lalphabeta(solid(0.3, 0.5, 0.2)), rgb_to_lalphabeta(target));
    const Image tlab = rgb_to_lalphabeta(target);
    for (std::size_t c = 0; c < 3; ++c) {
        double mt = 0;
        for (std::size_t i = 0; i < tlab.pixel_count(); ++i) mt += tlab.data()[i * 3 + c];
        for (std::size_t i = 0; i < lab.pixel_count(); ++i) {
            CHECK(lab.data()[i * 3 + c] == doctest::Approx(mt / tlab.pixel_count()).epsilon(1e-12));
        }
    }
}

TEST_CASE("unsharp mask") {
    const Image flat(6, 6, 3, 0.3);
    CHECK(max_abs_diff(unsharp_mask(flat, 2.0, 1.0), flat) < 1e-15);
    Rng rng(15);
    const Image img = oracle::random_image(rng, 6, 6, 3);
    CHECK(unsharp_mask(img, 0.0, 1.0) == img);
}

TEST_CASE("displacement fields") {
    DisplacementOptions zero;
    zero.amplitude_px = 0.0;
    Rng r0(1);
    const WarpField z = make_displacement_field(16, 16, zero, r0);
    CHECK(z.max_abs() == 0.0);

    for (auto method : {ElasticMethod::perpixel, ElasticMethod::grid}) {
        for (auto [kind, param] : {std::pair{spectral::KernelKind::disk, 5.0}, std::pair{spectral::KernelKind::gaussian, 4.0},
                                   std::pair{spectral::KernelKind::log, 0.5}}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                DisplacementOptions o;
                o.method = method;
                o.filter = kind;
                o.filter_param = param;
                o.amplitude_px = 15.0;
                Rng rng(derive_seed({seed, 3}));
                const WarpField f = make_displacement_field(64, 64, o, rng);
                CHECK(f.height() == 64);
                CHECK(f.max_abs() <= 15.0);
                if (method == ElasticMethod::perpixel && kind != spectral::KernelKind::log) {
                    Rng raw_rng(derive_seed({seed, 4}));
                    Plane raw(64, 64);
                    for (auto& v : raw.values) v = 15.0 * raw_rng.uniform(-1, 1);
                    CHECK(total_variation(f.dx) < total_variation(raw));
                }
            }
        }
    }

    Plane step(2, 2);
    step(0, 1) = 1.0;
    CHECK(total_variation(step) == 2.0);

    DisplacementOptions bad;
    bad.amplitude_px = -1.0;
    Rng r1(1);
    CHECK_THROWS_AS(make_displacement_field(8, 8, bad, r1), Error);
}
