#pragma once

#include "sentinel/ingest.hpp"
#include "sentinel/metrics.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sentinel::eval {

/// Level shift added to a variable subset over [start, start+length).
struct SynthAnomaly {
    std::uint64_t start = 0;
    std::uint64_t length = 1;
    std::vector<std::size_t> variables;
    double magnitude = 0.0;
};

/// Labeled synthetic multivariate stream: variables inside a group share a
/// smooth latent signal (sum of slow sinusoids) plus independent Gaussian
/// noise, so their pairwise correlation over clean stretches stays high;
/// everything else gets an independent latent.
struct SynthSpec {
    std::size_t n_variables = 9;
    std::uint64_t length = 4316;
    std::vector<std::vector<std::size_t>> groups = {{0, 1, 2, 3}};
    double amplitude = 0.4;
    double noise_sigma = 0.005;
    double base_offset = 8.0;
    double offset_step = 0.5;
    std::vector<SynthAnomaly> anomalies = {
        {1700, 13, {0, 1, 2, 3}, 8.0},
        {1830, 25, {0, 1, 2, 3}, -7.0},
        {3350, 71, {0, 1, 2, 3}, 8.0},
        {3900, 77, {0, 1, 2, 3}, -7.0},
    };
    double feasibility_thd = 0.95;       // required clean-window group correlation
    std::size_t check_window = 2880;     // points used for that check
};

class InfeasibleSpec : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Latent parameters drawn once from the seed; evaluation at any (variable,
/// t) is then stateless, which lets sources stream without materializing.
struct SynthModel {
    struct Latent {
        std::array<double, 3> amplitude;
        std::array<double, 3> cycles;
        std::array<double, 3> phase;
    };
    SynthSpec spec;
    std::uint64_t seed = 0;
    std::vector<Latent> latents;          // one per latent signal
    std::vector<std::size_t> latent_of;   // variable -> latent index
    std::vector<double> offset;
    std::vector<double> scale;
};

SynthModel build_model(const SynthSpec& spec, std::uint64_t seed);

/// Value of one variable at one time point, anomaly shifts included.
double value_at(const SynthModel& model, std::size_t variable, std::uint64_t t);

std::vector<std::string> variable_names(const SynthSpec& spec);

/// ISO-8601 timestamp on a one-minute cadence from a fixed epoch.
std::string timestamp_at(std::uint64_t t);

std::vector<GroundTruth> labels(const SynthSpec& spec);

struct GroupCorrelation {
    std::size_t group = 0;
    double min_pairwise = 0.0;
};

/// Minimum pairwise clean-window correlation per group, computed over the
/// longest anomaly-free stretch (capped at check_window points). Throws
/// InfeasibleSpec when any group falls below feasibility_thd.
std::vector<GroupCorrelation> verify_correlations(const SynthModel& model);

void write_csv(std::ostream& out, const SynthModel& model);
void write_labels(std::ostream& out, std::span<const GroundTruth> truth);

/// Streams the generated samples directly, without materializing the series.
class SynthSource : public ingest::SampleSource {
public:
    SynthSource(const SynthSpec& spec, std::uint64_t seed);

    std::optional<MultivariateSample> next() override;
    const std::vector<std::string>& variable_names() const override { return names_; }

private:
    SynthModel model_;
    std::vector<std::string> names_;
    std::uint64_t next_t_ = 0;
};

} // namespace sentinel::eval
