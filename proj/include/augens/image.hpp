#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace augens {

/// Dense row-major real matrix. Used for single image channels and for real
/// coefficient planes (DCT, wavelet bands, sinograms).
struct Plane {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Plane() = default;
    Plane(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    bool same_shape(const Plane& o) const noexcept { return rows == o.rows && cols == o.cols; }

    friend bool operator==(const Plane&, const Plane&) = default;
};

struct ComplexPlane {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> values;

    ComplexPlane() = default;
    ComplexPlane(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {}

    std::complex<double>& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    const std::complex<double>& operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// H x W x C raster, channels-last, nominal range [0,1].
class Image {
public:
    Image() = default;
    Image(std::size_t height, std::size_t width, std::size_t channels, double fill = 0.0);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept { return height_ * width_; }
    bool empty() const noexcept { return data_.empty(); }

    double& at(std::size_t y, std::size_t x, std::size_t c) { return data_[(y * width_ + x) * channels_ + c]; }
    double at(std::size_t y, std::size_t x, std::size_t c) const { return data_[(y * width_ + x) * channels_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Plane channel(std::size_t c) const;
    void set_channel(std::size_t c, const Plane& plane);

    bool same_shape(const Image& o) const noexcept {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    static Image from_planes(std::span<const Plane> planes);

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::size_t channels_ = 0;
    std::vector<double> data_;
};

/// Clamps every value to [0,1]. Throws on NaN.
Image clamp01(const Image& img);
Plane clamp01(const Plane& plane);

/// Throws unless the image is at least 2x2 with 1 or 3 channels.
void validate_image(const Image& img);

Image to_grayscale(const Image& img);
/// Replicates a 1-channel image into 3 identical channels.
Image gray_to_rgb(const Image& img);
/// True for 1-channel images and 3-channel images whose channels are identical.
bool is_grayscale(const Image& img);

/// Box-filter resampling to the requested size; each output pixel is the
/// area-weighted mean of the source pixels it covers.
Image resize_area(const Image& img, std::size_t height, std::size_t width);

double max_abs_diff(const Image& a, const Image& b);
double max_abs_diff(const Plane& a, const Plane& b);

}  // namespace augens
