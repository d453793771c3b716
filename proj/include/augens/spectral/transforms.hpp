#pragma once

#include "augens/image.hpp"

namespace augens::spectral {

/// Orthonormal 2-D DCT-II. The coefficient plane has the input's shape;
/// coefficient (0,0) is the DC term and equals mean * sqrt(rows * cols).
Plane dct2(const Plane& plane);
/// Orthonormal inverse (DCT-III).
Plane idct2(const Plane& coeffs);

/// Unitary 2-D DFT: both directions scale by 1/sqrt(rows * cols), so
/// Parseval holds without correction factors.
ComplexPlane fft2(const Plane& plane);
ComplexPlane fft2(const ComplexPlane& plane);
ComplexPlane ifft2(const ComplexPlane& spectrum);
/// Real part of ifft2.
Plane ifft2_real(const ComplexPlane& spectrum);

}  // namespace augens::spectral
