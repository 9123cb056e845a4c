#include "sentinel/commands.hpp"

#include "sentinel/engine.hpp"
#include "sentinel/report_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

namespace sentinel::cli {

namespace {

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

int cmd_run(const RunConfig& cfg, std::ostream& diagnostics, const std::atomic<bool>* stop) {
    const auto errors = validate(cfg);
    if (!errors.empty()) {
        diagnostics << "invalid configuration:\n";
        for (const auto& e : errors) diagnostics << "  " << e << "\n";
        return kExitValidation;
    }

    try {
        auto source = ingest::make_source(cfg.source);
        // Pull the first sample before building the coordinator: the header
        // fixes the variable count.
        auto first = source->next();
        const std::vector<std::string>& names = source->variable_names();
        if (!first) {
            diagnostics << "empty stream, nothing to do\n";
            return kExitOk;
        }

        fuse::Coordinator coordinator(coordinator_config(cfg, names.size()));

        std::unique_ptr<std::ofstream> report_file, trace_file;
        std::ostream* reports = &std::cout;
        if (!cfg.out_reports.empty()) {
            report_file = open_out(cfg.out_reports);
            reports = report_file.get();
        }
        engine::RunOptions options;
        options.reports = reports;
        if (!cfg.out_trace.empty()) {
            trace_file = open_out(cfg.out_trace);
            options.trace = trace_file.get();
        }
        options.stop = stop;

        // A small wrapper source that replays the already-pulled sample.
        class Prefixed : public ingest::SampleSource {
        public:
            Prefixed(std::optional<MultivariateSample> first, ingest::SampleSource& rest)
                : first_(std::move(first)), rest_(rest) {}
            std::optional<MultivariateSample> next() override {
                if (first_) {
                    auto s = std::move(*first_);
                    first_.reset();
                    return s;
                }
                return rest_.next();
            }
            const std::vector<std::string>& variable_names() const override {
                return rest_.variable_names();
            }

        private:
            std::optional<MultivariateSample> first_;
            ingest::SampleSource& rest_;
        } prefixed(std::move(first), *source);

        const engine::RunSummary summary = engine::run_stream(prefixed, coordinator, names,
                                                              options);

        nlohmann::json j;
        j["samples"] = summary.samples;
        j["reports"] = summary.report_count;
        j["latency_mean_s"] = summary.latency_mean_s;
        j["latency_std_s"] = summary.latency_std_s;
        if (summary.stopped_early) j["stopped_early"] = true;
        diagnostics << j.dump() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        diagnostics << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_evaluate(const EvaluateConfig& cfg, std::ostream& out, std::ostream& diagnostics) {
    if (cfg.k < 0) {
        diagnostics << "invalid configuration:\n  k: must be >= 0\n";
        return kExitValidation;
    }
    try {
        std::ifstream reports_in(cfg.reports_path);
        if (!reports_in)
            throw std::runtime_error("cannot open reports file '" + cfg.reports_path + "'");
        const auto reports = io::read_reports(reports_in);

        std::ifstream labels_in(cfg.labels_path);
        if (!labels_in)
            throw std::runtime_error("cannot open labels file '" + cfg.labels_path + "'");
        const auto truth = io::read_labels(labels_in);

        std::vector<std::int64_t> points;
        std::set<std::int64_t> unique_ts;
        for (const auto& r : reports) {
            if (cfg.fp_per_variable) {
                for (std::size_t i = 0; i < std::max<std::size_t>(r.variables.size(), 1); ++i)
                    points.push_back(r.t);
            } else {
                unique_ts.insert(r.t);
            }
        }
        if (!cfg.fp_per_variable) points.assign(unique_ts.begin(), unique_ts.end());

        const eval::Metrics m = eval::match_detections(points, truth, cfg.k);

        nlohmann::json j;
        j["tp"] = m.tp;
        j["fp"] = m.fp;
        j["fn"] = m.fn;
        j["precision"] = m.precision ? nlohmann::json(*m.precision) : nlohmann::json();
        j["recall"] = m.recall ? nlohmann::json(*m.recall) : nlohmann::json();
        j["f_score"] = m.f_score ? nlohmann::json(*m.f_score) : nlohmann::json();
        j["k"] = cfg.k;

        if (!cfg.trace_path.empty()) {
            std::ifstream trace_in(cfg.trace_path);
            if (!trace_in)
                throw std::runtime_error("cannot open trace file '" + cfg.trace_path + "'");
            const auto trace = io::read_trace(trace_in);
            std::vector<std::int64_t> standalone;
            std::set<std::int64_t> standalone_unique;
            for (const auto& rec : trace) {
                if (rec.status != detect::Status::Anomalous) continue;
                if (cfg.fp_per_variable)
                    standalone.push_back(rec.t);
                else
                    standalone_unique.insert(rec.t);
            }
            if (!cfg.fp_per_variable)
                standalone.assign(standalone_unique.begin(), standalone_unique.end());
            const auto [fp_joint, fp_individual] =
                eval::compare_fp(points, standalone, truth, cfg.k);
            j["fp_joint"] = fp_joint;
            j["fp_individual"] = fp_individual;
        }

        out << j.dump() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        diagnostics << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_gensynth(const GenSynthConfig& cfg, std::ostream& diagnostics) {
    try {
        const eval::SynthModel model = eval::build_model(cfg.spec, cfg.seed);
        const auto correlations = eval::verify_correlations(model);

        auto csv = open_out(cfg.out_csv);
        eval::write_csv(*csv, model);
        auto labels_out = open_out(cfg.out_labels);
        const auto truth = eval::labels(cfg.spec);
        eval::write_labels(*labels_out, truth);

        for (const auto& c : correlations)
            diagnostics << "group " << c.group << ": min clean-window correlation "
                        << c.min_pairwise << "\n";
        diagnostics << "wrote " << cfg.spec.length << " samples to " << cfg.out_csv << ", "
                    << truth.size() << " labels to " << cfg.out_labels << "\n";
        return kExitOk;
    } catch (const eval::InfeasibleSpec& e) {
        diagnostics << "infeasible spec: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        diagnostics << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace sentinel::cli
