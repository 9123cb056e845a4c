#include "sentinel/ingest.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace sentinel::ingest {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_value(const std::string& field) {
    const std::string token = trim(field);
    double out = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end)
        throw FormatError("unparseable value '" + token + "'");
    if (!std::isfinite(out)) throw FormatError("non-finite value '" + token + "'");
    return out;
}

} // namespace

std::vector<std::string> parse_header(const std::string& line) {
    const auto fields = split_csv(line);
    if (fields.size() < 2 || trim(line).empty())
        throw FormatError("header must name a timestamp column and at least one variable");
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const std::string name = trim(fields[i]);
        if (name.empty()) throw FormatError("empty variable name in header");
        if (!seen.insert(name).second)
            throw FormatError("duplicate variable name '" + name + "' in header");
        names.push_back(name);
    }
    return names;
}

RawRecord parse_record(const std::string& line, std::size_t n_values) {
    const auto fields = split_csv(line);
    if (fields.size() != n_values + 1)
        throw FormatError("expected " + std::to_string(n_values + 1) + " fields, got " +
                          std::to_string(fields.size()));
    RawRecord rec;
    rec.timestamp = trim(fields[0]);
    rec.values.reserve(n_values);
    for (std::size_t i = 1; i < fields.size(); ++i) rec.values.push_back(parse_value(fields[i]));
    return rec;
}

LineSource::LineSource(SourceConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.interval_seconds < 0.0)
        throw std::invalid_argument("source: interval must be >= 0");
    if (cfg_.path == "-") {
        in_ = &std::cin;
    } else {
        auto file = std::make_unique<std::ifstream>(cfg_.path);
        if (!*file) throw std::runtime_error("source: cannot open '" + cfg_.path + "'");
        owned_ = std::move(file);
        in_ = owned_.get();
    }
}

LineSource::LineSource(SourceConfig cfg, std::unique_ptr<std::istream> stream)
    : cfg_(std::move(cfg)), owned_(std::move(stream)), in_(owned_.get()) {
    if (cfg_.interval_seconds < 0.0)
        throw std::invalid_argument("source: interval must be >= 0");
}

void LineSource::read_header() {
    header_done_ = true;
    if (!cfg_.header_required) return;
    std::string line;
    while (std::getline(*in_, line)) {
        ++line_no_;
        if (trim(line).empty()) continue;
        names_ = parse_header(line);
        return;
    }
    throw FormatError(cfg_.path + ": missing header line");
}

std::optional<MultivariateSample> LineSource::next() {
    if (!header_done_) read_header();

    std::string line;
    while (std::getline(*in_, line)) {
        ++line_no_;
        if (trim(line).empty()) continue;

        if (names_.empty()) {
            // Headerless stream: arity comes from the first record.
            const auto fields = split_csv(line);
            if (fields.size() < 2) throw FormatError("record with no value fields");
            for (std::size_t i = 1; i < fields.size(); ++i)
                names_.push_back("v" + std::to_string(i));
        }

        RawRecord rec;
        try {
            rec = parse_record(line, names_.size());
        } catch (const FormatError& e) {
            const std::string where = cfg_.path + ":" + std::to_string(line_no_);
            if (cfg_.strict) throw FormatError(where + ": " + e.what());
            std::cerr << "ingest: skipping " << where << ": " << e.what() << "\n";
            continue;
        }

        if (cfg_.interval_seconds > 0.0) {
            const auto gap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(cfg_.interval_seconds));
            if (emitted_any_) std::this_thread::sleep_until(last_emit_ + gap);
            last_emit_ = std::chrono::steady_clock::now();
            emitted_any_ = true;
        }

        MultivariateSample sample;
        sample.t = next_t_++;
        sample.timestamp = std::move(rec.timestamp);
        sample.values = std::move(rec.values);
        return sample;
    }

    if (in_->bad()) throw std::runtime_error(cfg_.path + ": read failure at line " +
                                             std::to_string(line_no_));
    return std::nullopt;
}

std::unique_ptr<SampleSource> make_source(const SourceConfig& cfg) {
    return std::make_unique<LineSource>(cfg);
}

} // namespace sentinel::ingest
