#pragma once

#include <span>
#include <vector>

#include "augens/image.hpp"

namespace augens::spectral {

/// Row-major K x D basis. `components` rows are orthonormal; variances are
/// sample variances (divisor M - 1) in descending order.
struct PcaBasis {
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> components;
    std::vector<double> variances;

    std::span<const double> component(std::size_t k) const {
        return std::span<const double>(components).subspan(k * dim, dim);
    }
};

/// Fits `k` principal components to the rows of `rows` (M x D, one sample per
/// row). Each component's largest-magnitude entry is made positive.
/// Requires M >= 2 and k <= min(M - 1, D).
PcaBasis pca_fit(const Plane& rows, std::size_t k);

std::vector<double> pca_project(const PcaBasis& basis, std::span<const double> vec);
std::vector<double> pca_reconstruct(const PcaBasis& basis, std::span<const double> coeffs);

}  // namespace augens::spectral
