#include "sentinel/synth.hpp"

#include "sentinel/correlation.hpp"
#include "sentinel/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace sentinel::eval {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

void validate_spec(const SynthSpec& spec) {
    if (spec.n_variables < 2) throw InfeasibleSpec("synth: need at least 2 variables");
    if (spec.length < 16) throw InfeasibleSpec("synth: stream too short");
    if (spec.groups.empty()) throw InfeasibleSpec("synth: need at least one correlated group");
    if (spec.amplitude <= 0.0) throw InfeasibleSpec("synth: amplitude must be > 0");
    if (spec.noise_sigma < 0.0) throw InfeasibleSpec("synth: noise_sigma must be >= 0");

    std::set<std::size_t> grouped;
    for (const auto& g : spec.groups) {
        if (g.size() < 2) throw InfeasibleSpec("synth: a group needs >= 2 members");
        for (std::size_t v : g) {
            if (v >= spec.n_variables) throw InfeasibleSpec("synth: group member out of range");
            if (!grouped.insert(v).second)
                throw InfeasibleSpec("synth: variable in more than one group");
        }
    }
    for (const auto& a : spec.anomalies) {
        if (a.length < 1) throw InfeasibleSpec("synth: anomaly length must be >= 1");
        if (a.start + a.length > spec.length)
            throw InfeasibleSpec("synth: anomaly extends past the stream");
        if (a.variables.empty()) throw InfeasibleSpec("synth: anomaly with no variables");
        for (std::size_t v : a.variables)
            if (v >= spec.n_variables)
                throw InfeasibleSpec("synth: anomaly variable out of range");
    }
}

// Counter-based standard normal: one value per (seed, variable, t), so
// streaming and batch generation agree point for point.
double noise_at(std::uint64_t seed, std::size_t variable, std::uint64_t t) {
    const std::uint64_t key = splitmix64(seed ^ (0x517cc1b727220a95ULL * (t + 1) +
                                                 0x2545f4914f6cdd1dULL * (variable + 1)));
    const std::uint64_t u1bits = splitmix64(key);
    const std::uint64_t u2bits = splitmix64(u1bits);
    double u1 = static_cast<double>(u1bits >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(u2bits >> 11) * 0x1.0p-53;
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double latent_at(const SynthModel::Latent& l, std::uint64_t t, std::uint64_t length) {
    const double u = static_cast<double>(t) / static_cast<double>(length);
    double acc = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        acc += l.amplitude[k] * std::sin(kTwoPi * (l.cycles[k] * u + l.phase[k]));
    return acc;
}

// Longest stretch of [0, length) touched by no anomaly, as [begin, end).
std::pair<std::uint64_t, std::uint64_t> longest_clean_run(const SynthSpec& spec) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
    for (const auto& a : spec.anomalies) spans.emplace_back(a.start, a.start + a.length);
    std::sort(spans.begin(), spans.end());

    std::pair<std::uint64_t, std::uint64_t> best{0, 0};
    std::uint64_t cursor = 0;
    const auto consider = [&](std::uint64_t lo, std::uint64_t hi) {
        if (hi - lo > best.second - best.first) best = {lo, hi};
    };
    for (const auto& [lo, hi] : spans) {
        if (lo > cursor) consider(cursor, lo);
        cursor = std::max(cursor, hi);
    }
    consider(cursor, spec.length);
    return best;
}

} // namespace

SynthModel build_model(const SynthSpec& spec, std::uint64_t seed) {
    validate_spec(spec);

    SynthModel model;
    model.spec = spec;
    model.seed = seed;
    model.latent_of.assign(spec.n_variables, 0);
    model.offset.resize(spec.n_variables);
    model.scale.resize(spec.n_variables);

    Rng rng(seed);
    const auto draw_latent = [&] {
        SynthModel::Latent l{};
        // Slow components: a handful of cycles over the whole stream, so
        // windows of a few hundred points see real curvature.
        l.amplitude = {spec.amplitude, 0.5 * spec.amplitude, 0.25 * spec.amplitude};
        l.cycles = {rng.uniform(4.0, 8.0), rng.uniform(9.0, 17.0), rng.uniform(18.0, 33.0)};
        l.phase = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        return l;
    };

    std::vector<bool> grouped(spec.n_variables, false);
    for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        model.latents.push_back(draw_latent());
        for (std::size_t v : spec.groups[g]) {
            model.latent_of[v] = g;
            grouped[v] = true;
        }
    }
    for (std::size_t v = 0; v < spec.n_variables; ++v) {
        if (!grouped[v]) {
            model.latents.push_back(draw_latent());
            model.latent_of[v] = model.latents.size() - 1;
        }
    }
    for (std::size_t v = 0; v < spec.n_variables; ++v) {
        model.offset[v] = spec.base_offset + spec.offset_step * static_cast<double>(v);
        model.scale[v] = rng.uniform(0.85, 1.15);
    }
    return model;
}

double value_at(const SynthModel& model, std::size_t variable, std::uint64_t t) {
    const SynthSpec& spec = model.spec;
    double v = model.offset[variable] +
               model.scale[variable] *
                   latent_at(model.latents[model.latent_of[variable]], t, spec.length) +
               spec.noise_sigma * noise_at(model.seed, variable, t);
    for (const auto& a : spec.anomalies) {
        if (t < a.start || t >= a.start + a.length) continue;
        if (std::find(a.variables.begin(), a.variables.end(), variable) != a.variables.end())
            v += a.magnitude;
    }
    return v;
}

std::vector<std::string> variable_names(const SynthSpec& spec) {
    std::vector<std::string> names;
    names.reserve(spec.n_variables);
    for (std::size_t i = 0; i < spec.n_variables; ++i)
        names.push_back("v" + std::to_string(i + 1));
    return names;
}

std::string timestamp_at(std::uint64_t t) {
    // Days-to-civil conversion, epoch 2024-01-01T00:00:00Z, one minute per step.
    const std::uint64_t total_minutes = t;
    std::uint64_t days = total_minutes / 1440;
    const std::uint64_t minute_of_day = total_minutes % 1440;

    std::int64_t z = static_cast<std::int64_t>(days) + 739191;  // days since 0000-03-01
    const std::int64_t era = z / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = yoe + era * 400;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
    const std::int64_t year = m <= 2 ? y + 1 : y;

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lldT%02llu:%02llu:00Z",
                  static_cast<long long>(year), static_cast<long long>(m),
                  static_cast<long long>(d),
                  static_cast<unsigned long long>(minute_of_day / 60),
                  static_cast<unsigned long long>(minute_of_day % 60));
    return buf;
}

std::vector<GroundTruth> labels(const SynthSpec& spec) {
    const auto names = variable_names(spec);
    std::vector<GroundTruth> out;
    out.reserve(spec.anomalies.size());
    for (const auto& a : spec.anomalies) {
        GroundTruth g;
        g.start = static_cast<std::int64_t>(a.start);
        g.end = static_cast<std::int64_t>(a.start + a.length - 1);
        for (std::size_t v : a.variables) g.variables.push_back(names[v]);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<GroupCorrelation> verify_correlations(const SynthModel& model) {
    const SynthSpec& spec = model.spec;
    const auto [run_lo, run_hi] = longest_clean_run(spec);
    const std::uint64_t run_len = run_hi - run_lo;
    if (run_len < 2) throw InfeasibleSpec("synth: no clean stretch to verify correlations on");
    const std::uint64_t window = std::min<std::uint64_t>(run_len, spec.check_window);
    const std::uint64_t begin = run_hi - window;

    std::vector<GroupCorrelation> results;
    for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        const auto& members = spec.groups[g];
        std::vector<corr::VariableHistory> hist;
        hist.reserve(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) hist.emplace_back(window);
        for (std::uint64_t t = begin; t < run_hi; ++t)
            for (std::size_t i = 0; i < members.size(); ++i)
                hist[i].push(value_at(model, members[i], t));

        double min_r = 1.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const auto r = corr::pearson(hist[i], hist[j]);
                min_r = std::min(min_r, r.value_or(0.0));
            }
        }
        results.push_back({g, min_r});
        if (min_r < spec.feasibility_thd)
            throw InfeasibleSpec("synth: group " + std::to_string(g) +
                                 " clean-window correlation " + std::to_string(min_r) +
                                 " below " + std::to_string(spec.feasibility_thd) +
                                 " (noise too large for the requested correlation)");
    }
    return results;
}

void write_csv(std::ostream& out, const SynthModel& model) {
    const SynthSpec& spec = model.spec;
    const auto names = variable_names(spec);
    out << "timestamp";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    char buf[40];
    for (std::uint64_t t = 0; t < spec.length; ++t) {
        out << timestamp_at(t);
        for (std::size_t v = 0; v < spec.n_variables; ++v) {
            std::snprintf(buf, sizeof(buf), "%.17g", value_at(model, v, t));
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_labels(std::ostream& out, std::span<const GroundTruth> truth) {
    for (const auto& g : truth) {
        nlohmann::json j;
        j["start"] = g.start;
        j["end"] = g.end;
        j["variables"] = g.variables;
        out << j.dump() << '\n';
    }
}

SynthSource::SynthSource(const SynthSpec& spec, std::uint64_t seed)
    : model_(build_model(spec, seed)), names_(variable_names(spec)) {}

std::optional<MultivariateSample> SynthSource::next() {
    if (next_t_ >= model_.spec.length) return std::nullopt;
    MultivariateSample s;
    s.t = next_t_;
    s.timestamp = timestamp_at(next_t_);
    s.values.reserve(model_.spec.n_variables);
    for (std::size_t v = 0; v < model_.spec.n_variables; ++v)
        s.values.push_back(value_at(model_, v, next_t_));
    ++next_t_;
    return s;
}

} // namespace sentinel::eval
