#include "augens/spectral/radon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>

#include "augens/error.hpp"
#include "augens/spectral/transforms.hpp"

namespace augens::spectral {

namespace {

struct Direction {
    double c, s;
};

// Exact values at multiples of 90 degrees keep grid-symmetric projections exact.
Direction direction(double deg) {
    const double wrapped = std::fmod(deg, 360.0);
    if (wrapped == 0.0) return {1.0, 0.0};
    if (wrapped == 90.0) return {0.0, 1.0};
    if (wrapped == 180.0) return {-1.0, 0.0};
    if (wrapped == 270.0) return {0.0, -1.0};
    const double rad = deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

// Bilinear interpolation where everything outside the raster is zero. A sample
// that straddles the border picks up partial weight from the inside pixels.
double sample_zero(const Plane& p, double x, double y) {
    const double fx0 = std::floor(x), fy0 = std::floor(y);
    const double fx = x - fx0, fy = y - fy0;
    const long x0 = static_cast<long>(fx0), y0 = static_cast<long>(fy0);
    const long rows = static_cast<long>(p.rows), cols = static_cast<long>(p.cols);
    if (x0 < -1 || y0 < -1 || x0 >= cols || y0 >= rows) return 0.0;
    auto at = [&](long r, long c) {
        return (r < 0 || c < 0 || r >= rows || c >= cols) ? 0.0 : p(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };
    return (at(y0, x0) * (1.0 - fx) + at(y0, x0 + 1) * fx) * (1.0 - fy) +
           (at(y0 + 1, x0) * (1.0 - fx) + at(y0 + 1, x0 + 1) * fx) * fy;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Frequency response of the band-limited ramp filter for unit sample spacing:
// h[0] = 1/4, h[n odd] = -1/(pi n)^2, h[n even] = 0, arranged circularly.
// The response is divided by sinc^2, the transfer function of the linear
// interpolation the projector applies across each ray.
std::vector<double> ramp_response(std::size_t padded) {
    std::vector<double> h(padded, 0.0);
    h[0] = 0.25;
    for (std::size_t n = 1; n <= padded / 2; n += 2) {
        const double v = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(n * n));
        h[n] = v;
        h[padded - n] = v;
    }
    std::vector<double> response(padded);
    for (std::size_t k = 0; k < padded; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < padded; ++n) {
            if (h[n] == 0.0) continue;
            acc += h[n] * std::cos(2.0 * std::numbers::pi * static_cast<double>((k * n) % padded) / padded);
        }
        const double f = static_cast<double>(std::min(k, padded - k)) / static_cast<double>(padded);
        const double sinc = k == 0 ? 1.0 : std::sin(std::numbers::pi * f) / (std::numbers::pi * f);
        response[k] = acc / (sinc * sinc);
    }
    return response;
}

const std::vector<double>& cached_ramp_response(std::size_t padded) {
    static std::mutex mutex;
    static std::map<std::size_t, std::vector<double>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(padded);
    if (it == cache.end()) it = cache.emplace(padded, ramp_response(padded)).first;
    return it->second;
}

}  // namespace

std::size_t radon_bins(std::size_t rows, std::size_t cols) {
    const double diag = std::sqrt(static_cast<double>(rows * rows + cols * cols));
    return static_cast<std::size_t>(std::ceil(diag)) + 3;
}

std::vector<double> all_angles() {
    std::vector<double> a(180);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i);
    return a;
}

Sinogram radon(const Plane& plane, const std::vector<double>& angles_deg) {
    require(!angles_deg.empty(), ErrorCode::invalid_argument, "empty angle list");
    require(!plane.empty(), ErrorCode::invalid_argument, "empty plane");
    std::set<double> seen;
    for (double a : angles_deg) {
        require(a >= 0.0 && a < 180.0, ErrorCode::invalid_argument, "angles must lie in [0, 180)");
        require(seen.insert(a).second, ErrorCode::invalid_argument, "angles must be distinct");
    }

    const std::size_t bins = radon_bins(plane.rows, plane.cols);
    const double cx = (static_cast<double>(plane.cols) - 1.0) / 2.0;
    const double cy = (static_cast<double>(plane.rows) - 1.0) / 2.0;
    const double half = (static_cast<double>(bins) - 1.0) / 2.0;

    Sinogram sino;
    sino.projections = Plane(bins, angles_deg.size());
    sino.angles = angles_deg;
    sino.source_rows = plane.rows;
    sino.source_cols = plane.cols;
    for (std::size_t j = 0; j < angles_deg.size(); ++j) {
        const auto [c, s] = direction(angles_deg[j]);
        for (std::size_t r = 0; r < bins; ++r) {
            const double t = static_cast<double>(r) - half;
            double acc = 0.0;
            for (std::size_t k = 0; k < bins; ++k) {
                const double u = static_cast<double>(k) - half;
                // point = centre + t * (c, s) + u * (-s, c)
                acc += sample_zero(plane, cx + t * c - u * s, cy + t * s + u * c);
            }
            sino.projections(r, j) = acc;
        }
    }
    return sino;
}

Plane iradon(const Sinogram& sinogram) {
    const std::size_t bins = sinogram.bins();
    const std::size_t count = sinogram.angle_count();
    require(count > 0 && count == sinogram.angles.size(), ErrorCode::invalid_argument, "empty angle list");
    require(sinogram.source_rows > 0 && sinogram.source_cols > 0, ErrorCode::invalid_argument,
            "sinogram has no source size");

    const std::size_t padded = std::max<std::size_t>(64, next_pow2(2 * bins));
    const std::vector<double>& response = cached_ramp_response(padded);

    // Filter every projection; result stays in bins x count layout.
    Plane filtered(bins, count);
    for (std::size_t j = 0; j < count; ++j) {
        ComplexPlane column(1, padded);
        for (std::size_t r = 0; r < bins; ++r) column.values[r] = sinogram.projections(r, j);
        ComplexPlane spectrum = fft2(column);
        for (std::size_t k = 0; k < padded; ++k) spectrum.values[k] *= response[k];
        const ComplexPlane back = ifft2(spectrum);
        for (std::size_t r = 0; r < bins; ++r) filtered(r, j) = back.values[r].real();
    }

    const std::size_t rows = sinogram.source_rows, cols = sinogram.source_cols;
    const double cx = (static_cast<double>(cols) - 1.0) / 2.0;
    const double cy = (static_cast<double>(rows) - 1.0) / 2.0;
    const double half = (static_cast<double>(bins) - 1.0) / 2.0;
    std::vector<Direction> dirs(count);
    for (std::size_t j = 0; j < count; ++j) dirs[j] = direction(sinogram.angles[j]);

    Plane out(rows, cols);
    const double weight = std::numbers::pi / static_cast<double>(count);
    for (std::size_t y = 0; y < rows; ++y) {
        const double dy = static_cast<double>(y) - cy;
        for (std::size_t x = 0; x < cols; ++x) {
            const double dx = static_cast<double>(x) - cx;
            double acc = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                const double pos = dx * dirs[j].c + dy * dirs[j].s + half;
                const double fl = std::floor(pos);
                const long i0 = static_cast<long>(fl);
                const double f = pos - fl;
                auto tap = [&](long i) {
                    return (i < 0 || i >= static_cast<long>(bins)) ? 0.0 : filtered(static_cast<std::size_t>(i), j);
                };
                // Catmull-Rom cubic between taps i0 and i0 + 1.
                const double p0 = tap(i0 - 1), p1 = tap(i0), p2 = tap(i0 + 1), p3 = tap(i0 + 2);
                acc += p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
            }
            out(y, x) = acc * weight;
        }
    }
    return out;
}

}  // namespace augens::spectral
