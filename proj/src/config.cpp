#include "sentinel/config.hpp"

#include <cmath>
#include <fstream>

namespace sentinel::cli {

std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errors;
    if (!(cfg.thd_pos > 0.0 && cfg.thd_pos <= 1.0))
        errors.push_back("thd_pos: must be in (0, 1], got " + std::to_string(cfg.thd_pos));
    if (cfg.p < 2) errors.push_back("p: must be >= 2, got " + std::to_string(cfg.p));
    if (cfg.window < 2)
        errors.push_back("window: must be >= 2, got " + std::to_string(cfg.window));
    if (cfg.hidden_size < 1)
        errors.push_back("hidden-size: must be >= 1, got " + std::to_string(cfg.hidden_size));
    if (cfg.max_epochs < 1)
        errors.push_back("max-epochs: must be >= 1, got " + std::to_string(cfg.max_epochs));
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
        errors.push_back("learning-rate: must be > 0, got " + std::to_string(cfg.learning_rate));
    if (cfg.source.interval_seconds < 0.0)
        errors.push_back("interval: must be >= 0, got " +
                         std::to_string(cfg.source.interval_seconds));
    return errors;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config: " + path + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config: " + path + ": expected an object");

    for (const auto& [key, value] : j.items()) {
        if (key == "source") cfg.source.path = value.get<std::string>();
        else if (key == "interval") cfg.source.interval_seconds = value.get<double>();
        else if (key == "strict") cfg.source.strict = value.get<bool>();
        else if (key == "p") cfg.p = value.get<std::size_t>();
        else if (key == "thd_pos") cfg.thd_pos = value.get<double>();
        else if (key == "window") cfg.window = value.get<std::size_t>();
        else if (key == "hidden_size") cfg.hidden_size = value.get<std::size_t>();
        else if (key == "max_epochs") cfg.max_epochs = value.get<std::size_t>();
        else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "out") cfg.out_reports = value.get<std::string>();
        else if (key == "trace") cfg.out_trace = value.get<std::string>();
        else if (key == "parallel") cfg.parallel = value.get<bool>();
        else throw std::runtime_error("config: " + path + ": unknown key '" + key + "'");
    }
}

nlohmann::json effective_config(const RunConfig& cfg) {
    nlohmann::json j;
    j["source"] = cfg.source.path;
    j["interval"] = cfg.source.interval_seconds;
    j["strict"] = cfg.source.strict;
    j["p"] = cfg.p;
    j["thd_pos"] = cfg.thd_pos;
    j["thd_neg"] = -cfg.thd_pos;
    j["window"] = cfg.window;
    j["lookback"] = lstm::kLookback;
    j["hidden_size"] = cfg.hidden_size;
    j["max_epochs"] = cfg.max_epochs;
    j["learning_rate"] = cfg.learning_rate;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_reports;
    j["trace"] = cfg.out_trace;
    j["parallel"] = cfg.parallel;
    return j;
}

fuse::CoordinatorConfig coordinator_config(const RunConfig& cfg, std::size_t n_variables) {
    fuse::CoordinatorConfig cc;
    cc.n_variables = n_variables;
    cc.history_capacity = cfg.p;
    cc.thd_pos = cfg.thd_pos;
    cc.detector_window = cfg.window;
    cc.hidden_size = cfg.hidden_size;
    cc.seed = cfg.seed;
    cc.training.learning_rate = cfg.learning_rate;
    cc.training.max_epochs = cfg.max_epochs;
    cc.training.rng_seed = cfg.seed;
    cc.parallel = cfg.parallel;
    return cc;
}

} // namespace sentinel::cli
