#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sentinel::lstm {

/// Number of historical points fed to the predictor per forward pass.
inline constexpr std::size_t kLookback = 3;

/// Single-layer LSTM with a scalar input and a scalar linear readout.
///
/// All parameters live in one flat vector so gradients share the layout and
/// snapshots are a plain memory dump. Layout, with H = hidden_size:
///
///   [0,        4H)            input weights,      gate order i, f, g, o
///   [4H,       4H + 4H^2)     recurrent weights,  gate order i, f, g, o,
///                             each H x H row-major (row = unit, col = prev unit)
///   [4H+4H^2,  8H + 4H^2)     gate biases,        gate order i, f, g, o
///   [8H+4H^2,  9H + 4H^2)     readout weights
///   [9H+4H^2]                 readout bias
///
/// Gates i, f, o use the logistic sigmoid; the candidate g and the cell
/// output use tanh.
struct Model {
    std::size_t hidden_size = 0;
    std::vector<double> theta;

    std::size_t parameter_count() const { return theta.size(); }

    // Offsets into theta.
    std::size_t w_in(std::size_t gate) const { return gate * hidden_size; }
    std::size_t w_rec(std::size_t gate) const {
        return 4 * hidden_size + gate * hidden_size * hidden_size;
    }
    std::size_t bias(std::size_t gate) const {
        return 4 * hidden_size + 4 * hidden_size * hidden_size + gate * hidden_size;
    }
    std::size_t w_out() const {
        return 8 * hidden_size + 4 * hidden_size * hidden_size;
    }
    std::size_t b_out() const { return 9 * hidden_size + 4 * hidden_size * hidden_size; }
};

struct TrainingConfig {
    double learning_rate = 0.005;
    std::size_t max_epochs = 50;
    std::uint64_t rng_seed = 140;
    std::size_t early_stop_patience = 3;
    double early_stop_min_delta = 1e-6;
};

/// One supervised example: a lookback window and the value that followed it.
struct TrainingPair {
    std::array<double, kLookback> window{};
    double target = 0.0;
};

std::size_t parameter_count(std::size_t hidden_size);

/// Fresh model with weights drawn uniformly from [-0.08, 0.08]. The same
/// seed always yields the same parameters.
Model init_model(std::uint64_t seed, std::size_t hidden_size);

/// Predicts the value following `window`. Pure; rejects non-finite input.
double forward(const Model& model, std::span<const double> window);

/// Mean squared error of the model over `pairs`.
double loss(const Model& model, std::span<const TrainingPair> pairs);

/// Gradient of the squared error (y - target)^2 for a single pair,
/// backpropagated through all lookback steps. Same layout as Model::theta.
std::vector<double> gradient(const Model& model, const TrainingPair& pair);

/// Full-batch gradient descent on the MSE with early stopping: training ends
/// after `max_epochs` epochs or once the loss has failed to improve on the
/// best seen value by `early_stop_min_delta` for `early_stop_patience`
/// consecutive epochs. Returns the parameters with the lowest observed loss,
/// which is never worse than the input model. Throws on divergence.
Model train(Model model, std::span<const TrainingPair> pairs, const TrainingConfig& cfg);

/// Snapshot format: hidden_size as a little-endian uint32 followed by the
/// parameters as little-endian IEEE-754 doubles in theta order.
std::vector<std::uint8_t> serialize(const Model& model);
Model deserialize(std::span<const std::uint8_t> bytes);

} // namespace sentinel::lstm
