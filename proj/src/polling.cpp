#include "sentinel/polling.hpp"

#include "sentinel/correlation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sentinel::fuse {

std::optional<PollOutcome> poll_seed(std::size_t seed,
                                     std::span<const detect::Status> statuses,
                                     std::span<const double> values,
                                     const CorrelationFn& correlation, double thd_pos) {
    const std::size_t n = statuses.size();
    if (values.size() != n) throw std::invalid_argument("poll: status/value arity mismatch");
    if (seed >= n) throw std::out_of_range("poll: seed index");
    if (statuses[seed] != detect::Status::Anomalous)
        throw std::invalid_argument("poll: seed verdict is not anomalous");

    std::size_t agree = 1;  // the seed always counts for itself
    std::size_t disagree = 0;
    PollOutcome out;
    out.seed = seed;
    out.variables.push_back(seed);
    out.values.push_back(values[seed]);

    for (std::size_t b = 0; b < n; ++b) {
        if (b == seed) continue;
        if (!corr::is_highly_correlated(correlation(seed, b), thd_pos)) continue;
        if (statuses[b] == detect::Status::Anomalous) {
            ++agree;
            out.variables.push_back(b);
            out.values.push_back(values[b]);
        } else {
            ++disagree;
        }
    }

    if (agree > disagree && agree + disagree > 1) return out;
    return std::nullopt;
}

std::vector<PollOutcome> poll_timestep(std::span<const detect::Status> statuses,
                                       std::span<const double> values,
                                       const CorrelationFn& correlation, double thd_pos) {
    std::vector<PollOutcome> outcomes;
    for (std::size_t a = 0; a < statuses.size(); ++a) {
        if (statuses[a] != detect::Status::Anomalous) continue;
        if (auto out = poll_seed(a, statuses, values, correlation, thd_pos))
            outcomes.push_back(std::move(*out));
    }
    return outcomes;
}

std::optional<ConsolidatedReport> consolidate(std::uint64_t time_point,
                                              std::string timestamp,
                                              std::span<const PollOutcome> outcomes) {
    if (outcomes.empty()) return std::nullopt;
    std::map<std::size_t, double> merged;
    ConsolidatedReport report;
    report.time_point = time_point;
    report.timestamp = std::move(timestamp);
    for (const auto& o : outcomes) {
        report.seeds.push_back(o.seed);
        for (std::size_t i = 0; i < o.variables.size(); ++i)
            merged.emplace(o.variables[i], o.values[i]);
    }
    for (const auto& [var, value] : merged) {
        report.variables.push_back(var);
        report.values.push_back(value);
    }
    return report;
}

} // namespace sentinel::fuse
