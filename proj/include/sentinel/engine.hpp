#pragma once

#include "sentinel/coordinator.hpp"
#include "sentinel/ingest.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sentinel::engine {

struct RunOptions {
    std::ostream* reports = nullptr;        // JSONL, flushed per line
    std::ostream* trace = nullptr;          // per-step per-variable CSV
    const std::atomic<bool>* stop = nullptr;
    std::size_t queue_capacity = 256;
    bool collect_time_points = false;        // keep report/standalone t lists
};

struct RunSummary {
    std::uint64_t samples = 0;
    std::uint64_t report_count = 0;
    double latency_mean_s = 0.0;
    double latency_std_s = 0.0;
    bool stopped_early = false;
    // Populated only when collect_time_points is set.
    std::vector<std::int64_t> report_ts;
    std::vector<std::int64_t> standalone_ts;  // steps where any detector fired
};

/// Pumps the source through the coordinator until the stream ends or `stop`
/// is raised. The source runs on its own thread behind a bounded queue, so a
/// lagging consumer applies backpressure. A report for step t is written and
/// flushed before sample t+1 is taken off the queue; decision latency is
/// measured from queue handoff to that point.
RunSummary run_stream(ingest::SampleSource& source, fuse::Coordinator& coordinator,
                      const std::vector<std::string>& names, const RunOptions& options);

} // namespace sentinel::engine
