#pragma once

#include <span>
#include <string>
#include <vector>

#include "augens/ensemble/scores.hpp"
#include "augens/image.hpp"

namespace augens::ensemble {

struct ToyOptions {
    std::size_t downsample = 16;
    double l2 = 1e-3;
    std::size_t iterations = 200;
    /// Number of score columns; 0 means one past the largest training label.
    std::size_t classes = 0;
};

/// Multinomial logistic regression on standardized, area-downsampled pixels.
struct ToyModel {
    std::size_t classes = 0;
    std::size_t side = 0;
    std::size_t channels = 0;
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<double> weights;  // classes x (features + 1), bias last

    std::size_t features() const noexcept { return side * side * channels; }
};

std::vector<double> toy_features(const Image& img, std::size_t side);

/// Full-batch Nesterov descent from zero weights for a fixed number of
/// iterations. Samples are visited in a canonical order (label, then pixels),
/// so the model does not depend on the order of the training set.
ToyModel toy_train(std::span<const Image> images, std::span<const int> labels, const ToyOptions& options = {});

/// Class logits, one row per image.
ScoreMatrix toy_predict(const ToyModel& model, std::span<const Image> images,
                        std::span<const std::string> ids, const std::string& tag = {});

}  // namespace augens::ensemble
