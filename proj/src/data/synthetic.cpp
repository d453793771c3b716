#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "augens/data/dataset.hpp"
#include "augens/error.hpp"
#include "augens/spectral/filter.hpp"

namespace augens::data {

namespace {

struct Blob {
    double x, y, sigma, weight;
};

// Blobs on a ring; count, radius and phase depend on the class.
std::vector<Blob> class_layout(std::size_t cls, std::size_t size) {
    const double s = static_cast<double>(size);
    const std::size_t count = cls % 4 + 2;
    const double radius = s * (0.16 + 0.05 * static_cast<double>(cls % 3));
    const double phase = 0.7 * static_cast<double>(cls);
    std::vector<Blob> blobs;
    for (std::size_t j = 0; j < count; ++j) {
        const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
        blobs.push_back({s / 2.0 + radius * std::cos(a), s / 2.0 + radius * std::sin(a),
                         s * (0.05 + 0.015 * static_cast<double>(cls % 3)), 1.0 - 0.1 * static_cast<double>(j % 2)});
    }
    return blobs;
}

// Class tint in RGB.
std::array<double, 3> class_tint(std::size_t cls, std::size_t n_classes) {
    const double h = static_cast<double>(cls) / static_cast<double>(n_classes);
    auto wave = [&](double offset) { return 0.6 + 0.2 * std::cos(2.0 * std::numbers::pi * (h + offset)); };
    return {wave(0.0), wave(1.0 / 3.0), wave(2.0 / 3.0)};
}

}  // namespace

DatasetManifest make_synthetic(const SyntheticSpec& spec) {
    require(spec.n_classes >= 2, ErrorCode::invalid_argument, "synthetic data needs at least 2 classes");
    require(spec.image_size >= 16, ErrorCode::invalid_argument, "synthetic image size must be >= 16");
    require(spec.samples_per_class >= 1, ErrorCode::invalid_argument, "samples_per_class must be >= 1");
    require(spec.channels == 1 || spec.channels == 3, ErrorCode::channel_count, "synthetic channels must be 1 or 3");
    require(spec.noise_level >= 0.0, ErrorCode::invalid_argument, "noise level must be non-negative");

    const std::size_t n = spec.image_size;
    const Plane blur = spectral::make_kernel(spectral::KernelKind::gaussian, 1.0);
    DatasetManifest m;
    m.root = "synthetic";
    m.protocol = Protocol::kfold(5);
    for (std::size_t c = 0; c < spec.n_classes; ++c) m.classes.push_back("class" + std::to_string(c));

    for (std::size_t c = 0; c < spec.n_classes; ++c) {
        const auto layout = class_layout(c, n);
        const auto tint = class_tint(c, spec.n_classes);
        for (std::size_t i = 0; i < spec.samples_per_class; ++i) {
            Rng rng(derive_seed({spec.seed, c, i}));
            const double jitter = spec.noise_level * 0.15 * static_cast<double>(n);
            std::vector<Blob> blobs = layout;
            for (auto& b : blobs) {
                b.x += jitter * rng.uniform(-1.0, 1.0);
                b.y += jitter * rng.uniform(-1.0, 1.0);
            }
            const double brightness = spec.noise_level * 0.2 * rng.uniform(-1.0, 1.0);
            Plane pattern(n, n);
            for (std::size_t y = 0; y < n; ++y) {
                for (std::size_t x = 0; x < n; ++x) {
                    double v = 0.0;
                    for (const auto& b : blobs) {
                        const double dx = static_cast<double>(x) - b.x, dy = static_cast<double>(y) - b.y;
                        v += b.weight * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
                    }
                    pattern(y, x) = std::min(v, 1.0);
                }
            }
            Image img(n, n, spec.channels);
            for (std::size_t ch = 0; ch < spec.channels; ++ch) {
                const double t = (spec.channels == 3 ? tint[ch] : 0.8) + spec.noise_level * 0.3 * rng.uniform(-1.0, 1.0);
                Plane plane(n, n);
                for (std::size_t p = 0; p < plane.size(); ++p) {
                    plane.values[p] = 0.15 + brightness + 0.75 * t * pattern.values[p] +
                                      spec.noise_level * 0.5 * rng.uniform(-1.0, 1.0);
                }
                img.set_channel(ch, spectral::conv2_same(plane, blur));
            }
            Sample s;
            s.id = m.classes[c] + "/" + std::to_string(i);
            s.relative_path = m.classes[c] + "/" + std::to_string(i) + ".png";
            s.label = static_cast<int>(c);
            s.blob = std::make_shared<const Image>(clamp01(img));
            m.samples.push_back(std::move(s));
        }
    }
    validate(m);
    return m;
}

}  // namespace augens::data
