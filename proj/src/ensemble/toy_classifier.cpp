#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "augens/ensemble/toy_classifier.hpp"
#include "augens/error.hpp"

namespace augens::ensemble {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix design(const ToyModel& model, std::span<const Image> images) {
    const std::size_t f = model.features();
    Matrix x(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(f + 1));
    for (std::size_t i = 0; i < images.size(); ++i) {
        require(images[i].channels() == model.channels, ErrorCode::channel_count,
                "toy classifier expects " + std::to_string(model.channels) + "-channel images");
        const auto feat = toy_features(images[i], model.side);
        for (std::size_t j = 0; j < f; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (feat[j] - model.mean[j]) / model.scale[j];
        }
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = 1.0;
    }
    return x;
}

}  // namespace

std::vector<double> toy_features(const Image& img, std::size_t side) {
    const Image small = resize_area(img, side, side);
    const auto d = small.data();
    return {d.begin(), d.end()};
}

ToyModel toy_train(std::span<const Image> images, std::span<const int> labels, const ToyOptions& options) {
    require(images.size() == labels.size(), ErrorCode::dimension_mismatch, "one label per training image");
    require(!images.empty(), ErrorCode::invalid_argument, "toy classifier needs training images");
    require(options.downsample >= 1, ErrorCode::invalid_argument, "downsample size must be >= 1");
    const int max_label = *std::max_element(labels.begin(), labels.end());
    require(*std::min_element(labels.begin(), labels.end()) >= 0, ErrorCode::invalid_argument, "negative label");
    std::vector<bool> present(static_cast<std::size_t>(max_label) + 1, false);
    for (int l : labels) present[static_cast<std::size_t>(l)] = true;
    require(std::count(present.begin(), present.end(), true) >= 2, ErrorCode::invalid_argument,
            "toy classifier needs at least 2 classes in the training set");

    ToyModel model;
    model.classes = std::max(present.size(), options.classes);
    model.side = options.downsample;
    model.channels = images.front().channels();
    const std::size_t f = model.features();

    std::vector<std::vector<double>> feats;
    for (const auto& img : images) {
        require(img.channels() == model.channels, ErrorCode::channel_count, "training images differ in channel count");
        feats.push_back(toy_features(img, model.side));
    }
    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (labels[a] != labels[b]) return labels[a] < labels[b];
        return feats[a] < feats[b];
    });

    const double n = static_cast<double>(images.size());
    model.mean.assign(f, 0.0);
    model.scale.assign(f, 0.0);
    for (std::size_t i : order) {
        for (std::size_t j = 0; j < f; ++j) model.mean[j] += feats[i][j];
    }
    for (auto& m : model.mean) m /= n;
    for (std::size_t i : order) {
        for (std::size_t j = 0; j < f; ++j) model.scale[j] += (feats[i][j] - model.mean[j]) * (feats[i][j] - model.mean[j]);
    }
    for (auto& s : model.scale) s = s > 1e-24 * n ? std::sqrt(s / n) : 1.0;

    const auto rows = static_cast<Eigen::Index>(images.size());
    const auto cols = static_cast<Eigen::Index>(f + 1);
    const auto k = static_cast<Eigen::Index>(model.classes);
    Matrix x(rows, cols);
    Matrix y = Matrix::Zero(rows, k);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t i = order[static_cast<std::size_t>(r)];
        for (std::size_t j = 0; j < f; ++j) x(r, static_cast<Eigen::Index>(j)) = (feats[i][j] - model.mean[j]) / model.scale[j];
        x(r, cols - 1) = 1.0;
        y(r, labels[i]) = 1.0;
    }

    // 1/L with L bounding the Hessian of the mean cross-entropy plus the L2 term.
    const double lipschitz = 0.5 * x.rowwise().squaredNorm().mean() + options.l2;
    const double step = 1.0 / lipschitz;
    auto gradient = [&](const Matrix& w) {
        Matrix logits = x * w.transpose();
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double mx = logits.row(r).maxCoeff();
            logits.row(r) = (logits.row(r).array() - mx).exp();
            logits.row(r) /= logits.row(r).sum();
        }
        Matrix g = (logits - y).transpose() * x / n;
        g.leftCols(cols - 1) += options.l2 * w.leftCols(cols - 1);
        return g;
    };

    Matrix w = Matrix::Zero(k, cols);
    Matrix w_prev = w;
    double t = 1.0;
    for (std::size_t it = 0; it < options.iterations; ++it) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const Matrix look = w + ((t - 1.0) / t_next) * (w - w_prev);
        w_prev = w;
        w = look - step * gradient(look);
        t = t_next;
    }
    model.weights.assign(w.data(), w.data() + w.size());
    return model;
}

ScoreMatrix toy_predict(const ToyModel& model, std::span<const Image> images, std::span<const std::string> ids,
                        const std::string& tag) {
    require(ids.size() == images.size(), ErrorCode::dimension_mismatch, "one id per image");
    const Matrix x = design(model, images);
    const Eigen::Map<const Matrix> w(model.weights.data(), static_cast<Eigen::Index>(model.classes),
                                     static_cast<Eigen::Index>(model.features() + 1));
    const Matrix logits = x * w.transpose();
    ScoreMatrix out(std::vector<std::string>(ids.begin(), ids.end()), model.classes, tag);
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t c = 0; c < model.classes; ++c) {
            out.at(i, c) = logits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

}  // namespace augens::ensemble
