#pragma once

#include "sentinel/sample.hpp"

#include <chrono>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentinel::ingest {

struct SourceConfig {
    enum class Kind { CsvReplay, LineStream };
    Kind kind = Kind::CsvReplay;
    std::string path;                // file path, or "-" for stdin
    double interval_seconds = 0.0;   // pacing between emitted samples
    bool header_required = true;     // otherwise names are synthesized
    bool strict = true;              // reject bad records vs. skip with a log line
};

struct RawRecord {
    std::string timestamp;
    std::vector<double> values;
};

/// First column is the timestamp; remaining columns name the variables.
/// Throws on an empty header or duplicate names.
std::vector<std::string> parse_header(const std::string& line);

/// Timestamp plus exactly `n_values` finite reals. Throws FormatError
/// otherwise.
RawRecord parse_record(const std::string& line, std::size_t n_values);

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pull interface over an ordered sample stream. next() returns samples with
/// t = 0, 1, 2, ... and nullopt at end of stream.
class SampleSource {
public:
    virtual ~SampleSource() = default;
    virtual std::optional<MultivariateSample> next() = 0;
    virtual const std::vector<std::string>& variable_names() const = 0;
};

/// Replays newline-delimited records from a file, stdin or any istream,
/// optionally separated by at least `interval_seconds` of wall-clock time.
/// In strict mode a malformed record aborts with position context; in
/// permissive mode it is skipped and logged.
class LineSource : public SampleSource {
public:
    explicit LineSource(SourceConfig cfg);
    LineSource(SourceConfig cfg, std::unique_ptr<std::istream> stream);

    std::optional<MultivariateSample> next() override;
    const std::vector<std::string>& variable_names() const override { return names_; }

private:
    void read_header();

    SourceConfig cfg_;
    std::unique_ptr<std::istream> owned_;
    std::istream* in_ = nullptr;
    std::vector<std::string> names_;
    bool header_done_ = false;
    std::uint64_t next_t_ = 0;
    std::uint64_t line_no_ = 0;
    std::chrono::steady_clock::time_point last_emit_{};
    bool emitted_any_ = false;
};

std::unique_ptr<SampleSource> make_source(const SourceConfig& cfg);

} // namespace sentinel::ingest
