#include "augens/spectral/pca.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "augens/error.hpp"

namespace augens::spectral {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

// Extends `basis` (columns, orthonormal) with canonical directions until it has
// `want` columns; used when the data has fewer informative directions than k.
void complete_basis(Eigen::MatrixXd& basis, Eigen::Index filled, Eigen::Index want) {
    const Eigen::Index dim = basis.rows();
    for (Eigen::Index e = 0; e < dim && filled < want; ++e) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, e);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
        }
        const double n = v.norm();
        if (n < 0.5) continue;
        basis.col(filled++) = v / n;
    }
}

}  // namespace

PcaBasis pca_fit(const Plane& rows, std::size_t k) {
    const std::size_t m = rows.rows, d = rows.cols;
    require(m >= 2, ErrorCode::invalid_argument, "PCA needs at least 2 rows");
    require(k >= 1 && k <= std::min(m - 1, d), ErrorCode::invalid_argument,
            "PCA component count " + std::to_string(k) + " exceeds min(M-1, D) = " +
                std::to_string(std::min(m - 1, d)));

    Eigen::Map<const RowMatrix> x(rows.values.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const RowMatrix centered = x.rowwise() - mean;
    const double denom = static_cast<double>(m - 1);
    const auto kk = static_cast<Eigen::Index>(k);

    Eigen::MatrixXd basis(static_cast<Eigen::Index>(d), kk);
    Eigen::VectorXd variances = Eigen::VectorXd::Zero(kk);

    if (d <= m) {
        const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        require(solver.info() == Eigen::Success, ErrorCode::invalid_argument, "eigendecomposition failed");
        for (Eigen::Index j = 0; j < kk; ++j) {
            const Eigen::Index src = static_cast<Eigen::Index>(d) - 1 - j;
            basis.col(j) = solver.eigenvectors().col(src);
            variances(j) = std::max(0.0, solver.eigenvalues()(src));
        }
    } else {
        // Dual route: eigenvectors of the M x M Gram matrix map to covariance
        // eigenvectors through X^T v, with the same nonzero eigenvalues.
        const Eigen::MatrixXd gram = (centered * centered.transpose()) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        require(solver.info() == Eigen::Success, ErrorCode::invalid_argument, "eigendecomposition failed");
        const double top = std::max(solver.eigenvalues().maxCoeff(), 0.0);
        const double floor = 1e-12 * std::max(top, 1e-300);
        Eigen::Index filled = 0;
        for (Eigen::Index j = 0; j < kk; ++j) {
            const Eigen::Index src = static_cast<Eigen::Index>(m) - 1 - j;
            const double lambda = solver.eigenvalues()(src);
            if (!(lambda > floor) || top == 0.0) break;
            Eigen::VectorXd v = centered.transpose() * solver.eigenvectors().col(src);
            // Re-orthogonalize against earlier columns to absorb rounding.
            for (Eigen::Index i = 0; i < filled; ++i) v -= basis.col(i).dot(v) * basis.col(i);
            basis.col(filled) = v.normalized();
            variances(filled) = lambda;
            ++filled;
        }
        complete_basis(basis, filled, kk);
    }

    PcaBasis out;
    out.dim = d;
    out.count = k;
    out.mean.assign(mean.data(), mean.data() + d);
    out.components.resize(k * d);
    out.variances.resize(k);
    for (Eigen::Index j = 0; j < kk; ++j) {
        fix_sign(basis.col(j));
        for (std::size_t i = 0; i < d; ++i) out.components[static_cast<std::size_t>(j) * d + i] = basis(static_cast<Eigen::Index>(i), j);
        out.variances[static_cast<std::size_t>(j)] = variances(j);
    }
    return out;
}

std::vector<double> pca_project(const PcaBasis& basis, std::span<const double> vec) {
    require(vec.size() == basis.dim, ErrorCode::dimension_mismatch, "vector length does not match PCA basis");
    std::vector<double> centered(basis.dim);
    for (std::size_t i = 0; i < basis.dim; ++i) centered[i] = vec[i] - basis.mean[i];
    std::vector<double> coeffs(basis.count, 0.0);
    for (std::size_t k = 0; k < basis.count; ++k) {
        const auto comp = basis.component(k);
        double acc = 0.0;
        for (std::size_t i = 0; i < basis.dim; ++i) acc += comp[i] * centered[i];
        coeffs[k] = acc;
    }
    return coeffs;
}

std::vector<double> pca_reconstruct(const PcaBasis& basis, std::span<const double> coeffs) {
    require(coeffs.size() == basis.count, ErrorCode::dimension_mismatch, "coefficient count does not match PCA basis");
    std::vector<double> out = basis.mean;
    for (std::size_t k = 0; k < basis.count; ++k) {
        const auto comp = basis.component(k);
        for (std::size_t i = 0; i < basis.dim; ++i) out[i] += coeffs[k] * comp[i];
    }
    return out;
}

}  // namespace augens::spectral
