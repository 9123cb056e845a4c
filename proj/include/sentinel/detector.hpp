#pragma once

#include "sentinel/lstm.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>

namespace sentinel::detect {

enum class Status { Pending, Normal, Anomalous };

std::string to_string(Status s);

/// Per-step detection result for one variable.
struct Verdict {
    std::uint64_t time_point = 0;
    std::size_t variable_id = 0;
    Status status = Status::Pending;
    double value = 0.0;
    std::optional<double> prediction;
    std::optional<double> error;
    std::optional<double> aare;
    std::optional<double> threshold;
    bool retrained = false;
};

/// Mean of the most recent min(len, window) entries.
double compute_aare(std::span<const double> error_history, std::size_t window);

/// mu + 3*sigma (population sigma) over the most recent min(len, window)
/// entries; nullopt while fewer than two values exist.
std::optional<double> compute_threshold(std::span<const double> aare_history,
                                        std::size_t window);

/// Online detector for a single variable.
///
/// Keeps a small LSTM predictor, a bounded window of absolute relative
/// prediction errors and a bounded window of their running means (AARE).
/// Each step compares the current AARE against a threshold derived from the
/// AARE values of earlier steps; when it is exceeded the model is retrained
/// on the most recent fully observed (window, target) pair and the point is
/// flagged anomalous only if the retrained model still predicts poorly.
///
/// Verdicts are Pending until a prediction exists and at least two AARE
/// values precede the current step, so detection begins at t = 2*kLookback.
class LadDetector {
public:
    struct Config {
        std::size_t variable_id = 0;
        std::size_t window = 1440;       // W: cap for both history deques
        std::size_t hidden_size = 10;
        std::uint64_t seed = 140;
        double epsilon = 1e-8;           // relative-error denominator floor
        lstm::TrainingConfig training{};
    };

    explicit LadDetector(Config cfg);

    /// Ingest the value observed at time point t. t must advance by exactly
    /// one per call starting from 0; values must be finite.
    Verdict step(double value, std::uint64_t t);

    bool active() const { return model_.has_value(); }
    std::uint64_t points_seen() const { return points_seen_; }
    const lstm::Model& model() const;
    const std::deque<double>& error_history() const { return errors_; }
    const std::deque<double>& aare_history() const { return aares_; }
    const Config& config() const { return cfg_; }

private:
    void push_bounded(std::deque<double>& dq, double v, std::size_t cap);
    lstm::TrainingPair latest_complete_pair() const;

    Config cfg_;
    std::optional<lstm::Model> model_;   // absent during warm-up
    std::deque<double> recent_;          // last kLookback + 2 raw values
    std::deque<double> errors_;
    std::deque<double> aares_;
    std::uint64_t points_seen_ = 0;
};

} // namespace sentinel::detect
