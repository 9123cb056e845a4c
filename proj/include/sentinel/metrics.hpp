#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sentinel::eval {

/// Labeled anomaly interval [start, end], inclusive on both ends.
struct GroundTruth {
    std::int64_t start = 0;
    std::int64_t end = 0;
    std::vector<std::string> variables;

    std::int64_t point_count() const { return end - start + 1; }
};

struct Metrics {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_score;

    static Metrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);
};

/// Scores reported anomalous time points against labeled intervals.
///
/// A truth anomaly is detected when some reported point falls inside its
/// match window: [start-k, start+k] for single-point anomalies, [start-k,
/// end] for collective ones. Detected anomalies contribute their full point
/// count to TP, missed ones to FN; every reported entry outside all match
/// windows counts one FP (entries may repeat when the caller scores
/// per-variable detections). Truth intervals must not overlap.
Metrics match_detections(std::span<const std::int64_t> reported,
                         std::span<const GroundTruth> truth, std::int64_t k);

/// False-positive counts for the fused report stream vs. the union of
/// standalone per-variable detections from the same run.
std::pair<std::uint64_t, std::uint64_t> compare_fp(
    std::span<const std::int64_t> joint_reported,
    std::span<const std::int64_t> individual_reported,
    std::span<const GroundTruth> truth, std::int64_t k);

} // namespace sentinel::eval
