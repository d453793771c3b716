#include "augens/augment/photometric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augens/color.hpp"
#include "augens/error.hpp"
#include "augens/spectral/filter.hpp"

namespace augens::augment {

Image contrast_rescale(const Image& img, double low, double high) {
    require(low >= 0.0 && high <= 1.0 && low < high, ErrorCode::invalid_argument,
            "contrast bounds must satisfy 0 <= low < high <= 1");
    Image out = img;
    const double span = high - low;
    for (double& v : out.data()) {
        if (v <= low) {
            v = 0.0;
        } else if (v >= high) {
            v = 1.0;
        } else {
            v = (v - low) / span;
        }
    }
    return out;
}

Image high_pass_residual(const Image& img, double sigma) {
    Image blurred = spectral::gaussian_blur(img, sigma);
    Image out = img;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= blurred.data()[i];
    return out;
}

Image sharpness_residual(const Image& img, double sigma) {
    Image out = high_pass_residual(img, sigma);
    auto d = out.data();
    const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        std::fill(d.begin(), d.end(), 0.0);
        return out;
    }
    for (double& v : d) v = (v - lo) / (hi - lo);
    return out;
}

Image color_shift(const Image& img, const std::array<int, 3>& shifts) {
    Image out = img;
    const std::size_t ch = img.channels();
    auto d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::clamp(d[i] + shifts[i % ch] / 255.0, 0.0, 1.0);
    return out;
}

Image hsv_jitter(const Image& img, const HsvJitter& jitter) {
    require(img.channels() == 3, ErrorCode::channel_count, "HSV jitter needs 3 channels");
    Image hsv = rgb_to_hsv(img);
    auto d = hsv.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        double h = d[3 * i] + jitter.hue;
        h -= std::floor(h);
        d[3 * i] = h;
        d[3 * i + 1] = std::clamp(d[3 * i + 1] + jitter.saturation, 0.0, 1.0);
        const double v = d[3 * i + 2] + jitter.value;
        d[3 * i + 2] = std::clamp((v - 0.5) * jitter.contrast + 0.5, 0.0, 1.0);
    }
    return clamp01(hsv_to_rgb(hsv));
}

Image unsharp_mask(const Image& img, double amount, double radius) {
    Image blurred = spectral::gaussian_blur(img, radius);
    Image out = img;
    for (std::size_t i = 0; i < out.data().size(); ++i) {
        out.data()[i] += amount * (img.data()[i] - blurred.data()[i]);
    }
    return clamp01(out);
}

Image histogram_specification(const Image& img, const Image& target) {
    require(img.channels() == target.channels(), ErrorCode::channel_count, "source and target channel counts differ");
    const std::size_t ns = img.pixel_count(), nt = target.pixel_count();
    require(ns > 0 && nt > 0, ErrorCode::invalid_argument, "empty image");
    Image out(img.height(), img.width(), img.channels());
    std::vector<std::size_t> order(ns);
    std::vector<double> sorted_target(nt);
    for (std::size_t c = 0; c < img.channels(); ++c) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return img.data()[a * img.channels() + c] < img.data()[b * img.channels() + c];
        });
        for (std::size_t i = 0; i < nt; ++i) sorted_target[i] = target.data()[i * target.channels() + c];
        std::sort(sorted_target.begin(), sorted_target.end());
        for (std::size_t r = 0; r < ns; ++r) {
            const std::size_t q = (r * nt) / ns;
            out.data()[order[r] * img.channels() + c] = sorted_target[q];
        }
    }
    return out;
}

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

Moments channel_moments(const Image& img, std::size_t c) {
    const std::size_t n = img.pixel_count();
    Moments m;
    for (std::size_t i = 0; i < n; ++i) m.mean += img.data()[i * 3 + c];
    m.mean /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dv = img.data()[i * 3 + c] - m.mean;
        acc += dv * dv;
    }
    m.sd = std::sqrt(acc / static_cast<double>(n));
    return m;
}

}  // namespace

// Spread of a constant channel after rounding in the mean.
constexpr double kFlatSpread = 1e-12;

Image reinhard_transfer_lab(const Image& source_lab, const Image& target_lab) {
    require(source_lab.channels() == 3 && target_lab.channels() == 3, ErrorCode::channel_count,
            "Reinhard normalization needs 3 channels");
    Image out = source_lab;
    for (std::size_t c = 0; c < 3; ++c) {
        const Moments s = channel_moments(source_lab, c);
        const Moments t = channel_moments(target_lab, c);
        for (std::size_t i = 0; i < out.pixel_count(); ++i) {
            double& v = out.data()[i * 3 + c];
            v = s.sd > kFlatSpread * (1.0 + std::abs(s.mean)) ? (v - s.mean) * (t.sd / s.sd) + t.mean : t.mean;
        }
    }
    return out;
}

Image reinhard_normalize(const Image& img, const Image& target) {
    return lalphabeta_to_rgb(reinhard_transfer_lab(rgb_to_lalphabeta(img), rgb_to_lalphabeta(target)));
}

}  // namespace augens::augment
