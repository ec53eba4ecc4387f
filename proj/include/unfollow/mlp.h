#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "unfollow/scaling.h"

namespace unfollow {

enum class Activation { Relu, Tanh };

struct MlpConfig {
    std::vector<std::size_t> hidden = {64, 32};
    Activation activation = Activation::Relu;
    double learning_rate = 0.01;
    std::size_t batch_size = 32;
    std::size_t epochs = 50;
    std::uint64_t seed = 1;
};

struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // outputs x inputs, row-major
    std::vector<double> bias;

    bool operator==(const DenseLayer&) const = default;
};

// Feed-forward binary classifier: hidden layers with `activation`, one
// sigmoid output unit. `scaler`, when fitted, is applied to raw inputs by
// predict_proba; train_mlp itself expects already-scaled inputs.
struct MlpModel {
    std::vector<std::string> columns;
    MinMaxScaler scaler;
    Activation activation = Activation::Relu;
    std::vector<DenseLayer> layers;
    std::uint64_t seed = 0;

    std::size_t input_size() const { return layers.empty() ? 0 : layers.front().inputs; }
    std::size_t parameter_count() const;
    bool operator==(const MlpModel&) const = default;
};

// Xavier-uniform weights, zero biases.
MlpModel init_mlp(std::size_t inputs, const MlpConfig& config);

// Mini-batch SGD on mean binary cross-entropy. Throws InputError unless both
// classes have at least 2 examples.
MlpModel train_mlp(const Matrix& x, const std::vector<int>& y, const MlpConfig& config);

// Scales raw features, trains, and attaches the scaler and column names.
MlpModel fit_classifier(const Matrix& raw_x, const std::vector<int>& y, const MlpConfig& config,
                        std::vector<std::string> columns);

// Output logit and sigmoid for one row of already-scaled inputs.
double forward_logit(const MlpModel& model, const std::vector<double>& scaled_row);

// Throws SchemaError when a row's width differs from the model input size.
std::vector<double> predict_proba(const MlpModel& model, const Matrix& x);
// Label 1 iff probability >= threshold.
std::vector<int> predict(const MlpModel& model, const Matrix& x, double threshold = 0.5);

// Flattened parameters in layer order: weights then bias per layer.
std::vector<double> flatten_parameters(const MlpModel& model);
void assign_parameters(MlpModel& model, const std::vector<double>& params);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> gradient;  // matches flatten_parameters
};

// Mean binary cross-entropy over the given (scaled) rows and its gradient by backpropagation.
LossGradient loss_and_gradient(const MlpModel& model, const Matrix& x, const std::vector<int>& y);
double mean_loss(const MlpModel& model, const Matrix& x, const std::vector<int>& y);

void save_mlp(const MlpModel& model, std::ostream& out);
MlpModel load_mlp(std::istream& in);

}  // namespace unfollow
