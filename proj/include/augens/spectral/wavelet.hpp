#pragma once

#include <utility>

#include "augens/image.hpp"

namespace augens::spectral {

/// Single-level orthonormal Haar (db1) decomposition.
///
/// Band naming follows the usual dwt2 convention: `horizontal` holds detail
/// that is low-pass along rows and high-pass along columns (responds to
/// horizontal edges), `vertical` the transpose, `diagonal` high-pass in both.
/// Odd input sizes are replicate-padded by one row/column; the original size is
/// kept so the inverse crops back.
struct WaveletPlanes {
    Plane approx;      // cA
    Plane horizontal;  // cH
    Plane vertical;    // cV
    Plane diagonal;    // cD
    std::size_t source_rows = 0;
    std::size_t source_cols = 0;

    bool padded_rows() const noexcept { return source_rows % 2 == 1; }
    bool padded_cols() const noexcept { return source_cols % 2 == 1; }
};

/// One Haar butterfly: (a, b) -> ((a + b) / sqrt2, (a - b) / sqrt2).
std::pair<double, double> haar_pair(double a, double b) noexcept;

WaveletPlanes haar_dwt2(const Plane& plane);
Plane haar_idwt2(const WaveletPlanes& planes);

}  // namespace augens::spectral
