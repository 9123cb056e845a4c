#pragma once

#include "sentinel/detector.hpp"
#include "sentinel/metrics.hpp"
#include "sentinel/polling.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sentinel::io {

/// One JSON object per line: t, timestamp, variables, values, seeds.
void write_report_line(std::ostream& out, const fuse::ConsolidatedReport& report,
                       std::span<const std::string> names);

struct ReportRecord {
    std::int64_t t = 0;
    std::vector<std::string> variables;
};

std::vector<ReportRecord> read_reports(std::istream& in);

void write_labels_line(std::ostream& out, const eval::GroundTruth& truth);
std::vector<eval::GroundTruth> read_labels(std::istream& in);

/// Per-step per-variable trace as CSV.
void write_trace_header(std::ostream& out);
void write_trace_line(std::ostream& out, const std::string& name,
                      const detect::Verdict& verdict);

struct TraceRecord {
    std::int64_t t = 0;
    std::string variable;
    detect::Status status = detect::Status::Pending;
};

std::vector<TraceRecord> read_trace(std::istream& in);

} // namespace sentinel::io
