#include "augens/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "augens/error.hpp"

namespace augens {

Image::Image(std::size_t height, std::size_t width, std::size_t channels, double fill)
    : height_(height), width_(width), channels_(channels), data_(height * width * channels, fill) {}

Plane Image::channel(std::size_t c) const {
    require(c < channels_, ErrorCode::channel_count, "channel index out of range");
    Plane p(height_, width_);
    for (std::size_t i = 0; i < pixel_count(); ++i) p.values[i] = data_[i * channels_ + c];
    return p;
}

void Image::set_channel(std::size_t c, const Plane& plane) {
    require(c < channels_, ErrorCode::channel_count, "channel index out of range");
    require(plane.rows == height_ && plane.cols == width_, ErrorCode::dimension_mismatch,
            "plane does not match image size");
    for (std::size_t i = 0; i < pixel_count(); ++i) data_[i * channels_ + c] = plane.values[i];
}

Image Image::from_planes(std::span<const Plane> planes) {
    require(!planes.empty(), ErrorCode::invalid_argument, "no planes");
    Image img(planes[0].rows, planes[0].cols, planes.size());
    for (std::size_t c = 0; c < planes.size(); ++c) img.set_channel(c, planes[c]);
    return img;
}

namespace {

double clamp_value(double v) {
    require(!std::isnan(v), ErrorCode::invalid_argument, "NaN value");
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

Image clamp01(const Image& img) {
    Image out = img;
    for (double& v : out.data()) v = clamp_value(v);
    return out;
}

Plane clamp01(const Plane& plane) {
    Plane out = plane;
    for (double& v : out.values) v = clamp_value(v);
    return out;
}

void validate_image(const Image& img) {
    require(img.height() >= 2 && img.width() >= 2, ErrorCode::dimension_mismatch,
            "image must be at least 2x2, got " + std::to_string(img.height()) + "x" +
                std::to_string(img.width()));
    require(img.channels() == 1 || img.channels() == 3, ErrorCode::channel_count,
            "expected 1 or 3 channels, got " + std::to_string(img.channels()));
}

Image to_grayscale(const Image& img) {
    if (img.channels() == 1) return img;
    require(img.channels() == 3, ErrorCode::channel_count, "expected 3 channels");
    Image out(img.height(), img.width(), 1);
    auto src = img.data();
    auto dst = out.data();
    // ITU-R BT.601 luma weights (same as MATLAB rgb2gray).
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        dst[i] = 0.298936021293775 * src[3 * i] + 0.587043074451121 * src[3 * i + 1] +
                 0.114020904255103 * src[3 * i + 2];
    }
    return out;
}

Image gray_to_rgb(const Image& img) {
    require(img.channels() == 1, ErrorCode::channel_count, "expected 1 channel");
    Image out(img.height(), img.width(), 3);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    return out;
}

bool is_grayscale(const Image& img) {
    if (img.channels() == 1) return true;
    if (img.channels() != 3) return false;
    auto d = img.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        if (d[3 * i] != d[3 * i + 1] || d[3 * i] != d[3 * i + 2]) return false;
    }
    return true;
}

namespace {

// Overlap weights of destination cells [j*scale, (j+1)*scale) with source cells.
struct Span1d {
    std::size_t first;
    std::vector<double> weights;
};

std::vector<Span1d> area_weights(std::size_t src, std::size_t dst) {
    std::vector<Span1d> out(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t j = 0; j < dst; ++j) {
        const double lo = j * scale;
        const double hi = (j + 1) * scale;
        auto first = static_cast<std::size_t>(std::floor(lo));
        auto last = std::min(src - 1, static_cast<std::size_t>(std::ceil(hi)) - 1);
        out[j].first = first;
        for (std::size_t s = first; s <= last; ++s) {
            const double w = std::min(hi, static_cast<double>(s + 1)) - std::max(lo, static_cast<double>(s));
            out[j].weights.push_back(std::max(w, 0.0) / scale);
        }
    }
    return out;
}

}  // namespace

Image resize_area(const Image& img, std::size_t height, std::size_t width) {
    require(height > 0 && width > 0, ErrorCode::invalid_argument, "target size must be positive");
    if (img.height() == height && img.width() == width) return img;
    const auto wy = area_weights(img.height(), height);
    const auto wx = area_weights(img.width(), width);
    Image out(height, width, img.channels());
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            for (std::size_t c = 0; c < img.channels(); ++c) {
                double acc = 0.0;
                for (std::size_t i = 0; i < wy[y].weights.size(); ++i) {
                    for (std::size_t j = 0; j < wx[x].weights.size(); ++j) {
                        acc += wy[y].weights[i] * wx[x].weights[j] * img.at(wy[y].first + i, wx[x].first + j, c);
                    }
                }
                out.at(y, x, c) = acc;
            }
        }
    }
    return out;
}

double max_abs_diff(const Image& a, const Image& b) {
    require(a.same_shape(b), ErrorCode::dimension_mismatch, "image shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_abs_diff(const Plane& a, const Plane& b) {
    require(a.same_shape(b), ErrorCode::dimension_mismatch, "plane shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace augens
