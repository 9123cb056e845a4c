#include "sentinel/report_io.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

namespace sentinel::io {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, const char* what, std::size_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::runtime_error(std::string(what) + ": malformed record at line " +
                                 std::to_string(line_no));
    return j;
}

} // namespace

void write_report_line(std::ostream& out, const fuse::ConsolidatedReport& report,
                       std::span<const std::string> names) {
    json j;
    j["t"] = report.time_point;
    j["timestamp"] = report.timestamp;
    json vars = json::array();
    for (std::size_t v : report.variables) vars.push_back(names[v]);
    j["variables"] = std::move(vars);
    j["values"] = report.values;
    json seeds = json::array();
    for (std::size_t v : report.seeds) seeds.push_back(names[v]);
    j["seeds"] = std::move(seeds);
    out << j.dump() << '\n';
}

std::vector<ReportRecord> read_reports(std::istream& in) {
    std::vector<ReportRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = parse_line(line, "reports", line_no);
        ReportRecord rec;
        try {
            rec.t = j.at("t").get<std::int64_t>();
            for (const auto& v : j.at("variables")) rec.variables.push_back(v.get<std::string>());
        } catch (const json::exception& e) {
            throw std::runtime_error("reports: line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        out.push_back(std::move(rec));
    }
    return out;
}

void write_labels_line(std::ostream& out, const eval::GroundTruth& truth) {
    json j;
    j["start"] = truth.start;
    j["end"] = truth.end;
    j["variables"] = truth.variables;
    out << j.dump() << '\n';
}

std::vector<eval::GroundTruth> read_labels(std::istream& in) {
    std::vector<eval::GroundTruth> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = parse_line(line, "labels", line_no);
        eval::GroundTruth g;
        try {
            g.start = j.at("start").get<std::int64_t>();
            g.end = j.at("end").get<std::int64_t>();
            if (j.contains("variables"))
                for (const auto& v : j.at("variables")) g.variables.push_back(v.get<std::string>());
        } catch (const json::exception& e) {
            throw std::runtime_error("labels: line " + std::to_string(line_no) + ": " + e.what());
        }
        if (g.end < g.start)
            throw std::runtime_error("labels: line " + std::to_string(line_no) +
                                     ": end before start");
        out.push_back(std::move(g));
    }
    return out;
}

void write_trace_header(std::ostream& out) {
    out << "t,variable,value,prediction,error,aare,threshold,status,retrained\n";
}

void write_trace_line(std::ostream& out, const std::string& name,
                      const detect::Verdict& v) {
    const auto opt = [](const std::optional<double>& o) {
        return o ? std::to_string(*o) : std::string();
    };
    out << v.time_point << ',' << name << ',' << v.value << ',' << opt(v.prediction) << ','
        << opt(v.error) << ',' << opt(v.aare) << ',' << opt(v.threshold) << ','
        << detect::to_string(v.status) << ',' << (v.retrained ? 1 : 0) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& in) {
    std::vector<TraceRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.starts_with("t,")) continue;
        TraceRecord rec;
        // Only the columns evaluation needs: t, variable, status.
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const auto last = line.rfind(',');
        const auto status_begin = line.rfind(',', last - 1);
        if (first == std::string::npos || second == std::string::npos ||
            status_begin == std::string::npos)
            throw std::runtime_error("trace: malformed line " + std::to_string(line_no));
        rec.t = std::stoll(line.substr(0, first));
        rec.variable = line.substr(first + 1, second - first - 1);
        const std::string status = line.substr(status_begin + 1, last - status_begin - 1);
        if (status == "anomalous")
            rec.status = detect::Status::Anomalous;
        else if (status == "normal")
            rec.status = detect::Status::Normal;
        else
            rec.status = detect::Status::Pending;
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace sentinel::io
