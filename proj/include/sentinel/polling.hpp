#pragma once

#include "sentinel/detector.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sentinel::fuse {

/// Pairwise coefficient provider; nullopt means no usable coefficient
/// (too little history or a zero-variance window), which never counts as
/// highly correlated.
using CorrelationFn =
    std::function<std::optional<double>(std::size_t, std::size_t)>;

/// Result of one seed variable's poll: the seed plus every highly
/// correlated peer that was itself flagged at this time point, in the order
/// they were appended.
struct PollOutcome {
    std::size_t seed = 0;
    std::vector<std::size_t> variables;  // starts with the seed
    std::vector<double> values;          // aligned with variables
};

/// Polls the peers of one anomalous seed variable. Every other variable
/// whose coefficient against the seed is beyond +-thd_pos votes: agreement
/// if its own verdict at this time point is Anomalous, disagreement
/// otherwise (Pending votes disagree). The outcome stands only if
/// agreements outnumber disagreements and at least one peer voted.
std::optional<PollOutcome> poll_seed(std::size_t seed,
                                     std::span<const detect::Status> statuses,
                                     std::span<const double> values,
                                     const CorrelationFn& correlation, double thd_pos);

/// Runs poll_seed for every anomalous variable in index order.
std::vector<PollOutcome> poll_timestep(std::span<const detect::Status> statuses,
                                       std::span<const double> values,
                                       const CorrelationFn& correlation, double thd_pos);

/// One consolidated record per time point: the union of all successful
/// per-seed outcomes.
struct ConsolidatedReport {
    std::uint64_t time_point = 0;
    std::string timestamp;
    std::vector<std::size_t> variables;  // sorted, unique
    std::vector<double> values;          // aligned with variables
    std::vector<std::size_t> seeds;      // seeds whose poll succeeded
};

std::optional<ConsolidatedReport> consolidate(std::uint64_t time_point,
                                              std::string timestamp,
                                              std::span<const PollOutcome> outcomes);

} // namespace sentinel::fuse
