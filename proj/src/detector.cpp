#include "sentinel/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sentinel::detect {

namespace {

// Mean over [first, last).
template <class It>
double window_mean(It first, It last) {
    double acc = 0.0;
    std::size_t n = 0;
    for (It it = first; it != last; ++it, ++n) acc += *it;
    return acc / static_cast<double>(n);
}

// mu + 3*sigma over [first, last), population sigma; nullopt below 2 values.
template <class It>
std::optional<double> window_threshold(It first, It last) {
    const auto n = static_cast<std::size_t>(std::distance(first, last));
    if (n < 2) return std::nullopt;
    const double mean = window_mean(first, last);
    double var = 0.0;
    for (It it = first; it != last; ++it) {
        const double d = *it - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    return mean + 3.0 * std::sqrt(var);
}

} // namespace

std::string to_string(Status s) {
    switch (s) {
    case Status::Pending: return "pending";
    case Status::Normal: return "normal";
    case Status::Anomalous: return "anomalous";
    }
    return "unknown";
}

double compute_aare(std::span<const double> error_history, std::size_t window) {
    if (error_history.empty()) throw std::invalid_argument("compute_aare: empty history");
    const std::size_t n = std::min(error_history.size(), window);
    return window_mean(error_history.end() - n, error_history.end());
}

std::optional<double> compute_threshold(std::span<const double> aare_history,
                                        std::size_t window) {
    const std::size_t n = std::min(aare_history.size(), window);
    return window_threshold(aare_history.end() - n, aare_history.end());
}

LadDetector::LadDetector(Config cfg) : cfg_(cfg) {
    if (cfg_.window < 2) throw std::invalid_argument("detector: window must be >= 2");
    if (cfg_.hidden_size < 1) throw std::invalid_argument("detector: hidden_size must be >= 1");
    if (cfg_.epsilon <= 0.0) throw std::invalid_argument("detector: epsilon must be > 0");
}

const lstm::Model& LadDetector::model() const {
    if (!model_) throw std::logic_error("detector: no model before warm-up completes");
    return *model_;
}

void LadDetector::push_bounded(std::deque<double>& dq, double v, std::size_t cap) {
    dq.push_back(v);
    if (dq.size() > cap) dq.pop_front();
}

// Newest fully observed pair: the window ending two points back predicting
// the previous point. The pair ending at the current point is excluded so a
// suspect value never becomes its own training target.
lstm::TrainingPair LadDetector::latest_complete_pair() const {
    lstm::TrainingPair pair;
    const std::size_t sz = recent_.size();
    for (std::size_t i = 0; i < lstm::kLookback; ++i)
        pair.window[i] = recent_[sz - 2 - lstm::kLookback + i];
    pair.target = recent_[sz - 2];
    return pair;
}

Verdict LadDetector::step(double value, std::uint64_t t) {
    if (!std::isfinite(value))
        throw std::invalid_argument("detector: non-finite value at t=" + std::to_string(t));
    if (t != points_seen_)
        throw std::invalid_argument("detector: expected t=" + std::to_string(points_seen_) +
                                    ", got t=" + std::to_string(t));

    push_bounded(recent_, value, lstm::kLookback + 2);
    ++points_seen_;

    Verdict v;
    v.time_point = t;
    v.variable_id = cfg_.variable_id;
    v.value = value;

    // Warm-up: nothing to predict from until kLookback points exist; the
    // first model is fitted once the first target (point kLookback) arrives.
    if (points_seen_ <= lstm::kLookback) return v;
    if (points_seen_ == lstm::kLookback + 1) {
        lstm::TrainingPair pair;
        for (std::size_t i = 0; i < lstm::kLookback; ++i) pair.window[i] = recent_[i];
        pair.target = value;
        model_ = lstm::train(lstm::init_model(cfg_.seed, cfg_.hidden_size), {&pair, 1},
                             cfg_.training);
        return v;
    }

    const std::size_t sz = recent_.size();
    std::array<double, lstm::kLookback> window;
    for (std::size_t i = 0; i < lstm::kLookback; ++i)
        window[i] = recent_[sz - 1 - lstm::kLookback + i];

    const double denom = std::max(std::abs(value), cfg_.epsilon);
    double prediction = lstm::forward(*model_, window);
    double error = std::abs(value - prediction) / denom;

    // The cutoff for this step is fixed from the AARE values of earlier
    // steps; the current AARE is appended afterwards. It stays constant
    // across the retrain re-check below.
    const std::optional<double> threshold = window_threshold(aares_.begin(), aares_.end());

    push_bounded(errors_, error, cfg_.window);
    double aare = window_mean(errors_.begin(), errors_.end());
    push_bounded(aares_, aare, cfg_.window);

    v.prediction = prediction;
    v.error = error;
    v.aare = aare;

    if (!threshold) return v;  // still Pending: no basis for a cutoff yet
    v.threshold = threshold;

    if (aare <= *threshold) {
        v.status = Status::Normal;
        return v;
    }

    // Poor prediction: refit on the newest complete pair and re-judge the
    // point with the updated model. Only the current step's error is
    // replaced; older entries stay as recorded.
    const lstm::TrainingPair pair = latest_complete_pair();
    model_ = lstm::train(std::move(*model_), {&pair, 1}, cfg_.training);
    v.retrained = true;

    prediction = lstm::forward(*model_, window);
    error = std::abs(value - prediction) / denom;
    errors_.back() = error;
    aare = window_mean(errors_.begin(), errors_.end());
    aares_.back() = aare;

    v.prediction = prediction;
    v.error = error;
    v.aare = aare;
    v.status = (aare > *threshold) ? Status::Anomalous : Status::Normal;
    return v;
}

} // namespace sentinel::detect
