#pragma once

#include "sentinel/config.hpp"
#include "sentinel/synth.hpp"

#include <atomic>
#include <iosfwd>
#include <string>

namespace sentinel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Streams the source through the engine; reports go to cfg.out_reports (or
/// stdout) as they are produced, the run summary goes to `diagnostics`.
int cmd_run(const RunConfig& cfg, std::ostream& diagnostics,
            const std::atomic<bool>* stop = nullptr);

struct EvaluateConfig {
    std::string reports_path;
    std::string labels_path;
    std::string trace_path;  // optional: adds fused-vs-standalone FP counts
    std::int64_t k = 7;
    bool fp_per_variable = false;  // count (t, variable) entries instead of time points
};

int cmd_evaluate(const EvaluateConfig& cfg, std::ostream& out, std::ostream& diagnostics);

struct GenSynthConfig {
    eval::SynthSpec spec;
    std::uint64_t seed = 140;
    std::string out_csv = "synthetic.csv";
    std::string out_labels = "labels.jsonl";
};

int cmd_gensynth(const GenSynthConfig& cfg, std::ostream& diagnostics);

} // namespace sentinel::cli
