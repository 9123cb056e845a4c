#pragma once

#include "sentinel/correlation.hpp"
#include "sentinel/detector.hpp"
#include "sentinel/polling.hpp"
#include "sentinel/sample.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace sentinel::fuse {

struct CoordinatorConfig {
    std::size_t n_variables = 0;
    std::size_t history_capacity = 2880;  // p: correlation window
    double thd_pos = 0.95;                // thd_neg is always -thd_pos
    std::size_t detector_window = 1440;   // W
    std::size_t hidden_size = 10;
    std::uint64_t seed = 140;
    double epsilon = 1e-8;
    lstm::TrainingConfig training{};
    bool parallel = true;                 // fan detector steps out across workers
};

struct StepResult {
    std::uint64_t t = 0;
    std::vector<detect::Verdict> verdicts;
    std::vector<PollOutcome> polls;
    std::optional<ConsolidatedReport> report;
};

class DetectorPool;

/// Drives one full time step: fans the sample out to the per-variable
/// detectors, waits for every verdict, then polls the peers of each
/// anomalous variable over correlation windows that still end at the
/// previous point; the sample enters the histories only after polling.
class Coordinator {
public:
    explicit Coordinator(CoordinatorConfig cfg);
    ~Coordinator();

    Coordinator(const Coordinator&) = delete;
    Coordinator& operator=(const Coordinator&) = delete;

    StepResult process_timestep(const MultivariateSample& sample);

    std::size_t n_variables() const { return detectors_.size(); }
    std::uint64_t next_t() const { return next_t_; }
    const CoordinatorConfig& config() const { return cfg_; }
    const corr::CorrelationTracker& tracker() const { return tracker_; }
    const detect::LadDetector& detector(std::size_t i) const { return detectors_[i]; }

private:
    CoordinatorConfig cfg_;
    std::vector<detect::LadDetector> detectors_;
    corr::CorrelationTracker tracker_;
    std::unique_ptr<DetectorPool> pool_;
    std::uint64_t next_t_ = 0;
};

} // namespace sentinel::fuse
