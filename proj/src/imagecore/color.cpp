#include "augens/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "augens/error.hpp"

namespace augens {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

void require_rgb(const Image& img) {
    require(img.channels() == 3, ErrorCode::channel_count, "color conversion needs 3 channels");
}

Mat3 normalized_rgb_to_lms() {
    Mat3 m = {{{0.3811, 0.5783, 0.0402}, {0.1967, 0.7244, 0.0782}, {0.0241, 0.1288, 0.8444}}};
    for (auto& row : m) {
        const double s = row[0] + row[1] + row[2];
        for (double& v : row) v /= s;
    }
    return m;
}

Mat3 inverse(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 r{};
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return r;
}

std::array<double, 3> apply(const Mat3& m, double a, double b, double c) {
    return {m[0][0] * a + m[0][1] * b + m[0][2] * c, m[1][0] * a + m[1][1] * b + m[1][2] * c,
            m[2][0] * a + m[2][1] * b + m[2][2] * c};
}

const Mat3& rgb_to_lms() {
    static const Mat3 m = normalized_rgb_to_lms();
    return m;
}

const Mat3& lms_to_rgb() {
    static const Mat3 m = inverse(rgb_to_lms());
    return m;
}

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

Image rgb_to_hsv(const Image& img) {
    require_rgb(img);
    Image out(img.height(), img.width(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        const double mx = std::max({r, g, b});
        const double mn = std::min({r, g, b});
        const double delta = mx - mn;
        double h = 0.0;
        if (delta > 0.0) {
            if (mx == r) {
                h = (g - b) / delta;
            } else if (mx == g) {
                h = 2.0 + (b - r) / delta;
            } else {
                h = 4.0 + (r - g) / delta;
            }
            h /= 6.0;
            if (h < 0.0) h += 1.0;
            if (h >= 1.0) h -= 1.0;
        }
        dst[3 * i] = h;
        dst[3 * i + 1] = mx > 0.0 ? delta / mx : 0.0;
        dst[3 * i + 2] = mx;
    }
    return out;
}

Image hsv_to_rgb(const Image& img) {
    require_rgb(img);
    Image out(img.height(), img.width(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        double h = src[3 * i] - std::floor(src[3 * i]);
        const double s = src[3 * i + 1], v = src[3 * i + 2];
        const double h6 = h * 6.0;
        const double sector = std::floor(h6);
        const double f = h6 - sector;
        const double p = v * (1.0 - s);
        const double q = v * (1.0 - s * f);
        const double t = v * (1.0 - s * (1.0 - f));
        double r, g, b;
        switch (static_cast<int>(sector) % 6) {
            case 0: r = v, g = t, b = p; break;
            case 1: r = q, g = v, b = p; break;
            case 2: r = p, g = v, b = t; break;
            case 3: r = p, g = q, b = v; break;
            case 4: r = t, g = p, b = v; break;
            default: r = v, g = p, b = q; break;
        }
        dst[3 * i] = r;
        dst[3 * i + 1] = g;
        dst[3 * i + 2] = b;
    }
    return out;
}

Image rgb_to_lalphabeta(const Image& img) {
    require_rgb(img);
    Image out(img.height(), img.width(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        auto lms = apply(rgb_to_lms(), src[3 * i], src[3 * i + 1], src[3 * i + 2]);
        const double l = std::log10(lms[0] + kLogEpsilon);
        const double m = std::log10(lms[1] + kLogEpsilon);
        const double s = std::log10(lms[2] + kLogEpsilon);
        dst[3 * i] = kInvSqrt3 * (l + m + s);
        dst[3 * i + 1] = kInvSqrt6 * (l + m - 2.0 * s);
        dst[3 * i + 2] = kInvSqrt2 * (l - m);
    }
    return out;
}

Image lalphabeta_to_rgb_unclamped(const Image& img) {
    require_rgb(img);
    Image out(img.height(), img.width(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const double a = src[3 * i] * kInvSqrt3;
        const double b = src[3 * i + 1] * kInvSqrt6;
        const double c = src[3 * i + 2] * kInvSqrt2;
        const double l = a + b + c;
        const double m = a + b - c;
        const double s = a - 2.0 * b;
        auto rgb = apply(lms_to_rgb(), std::pow(10.0, l) - kLogEpsilon, std::pow(10.0, m) - kLogEpsilon,
                         std::pow(10.0, s) - kLogEpsilon);
        dst[3 * i] = rgb[0];
        dst[3 * i + 1] = rgb[1];
        dst[3 * i + 2] = rgb[2];
    }
    return out;
}

Image lalphabeta_to_rgb(const Image& img) { return clamp01(lalphabeta_to_rgb_unclamped(img)); }

}  // namespace augens
