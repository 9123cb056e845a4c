#include "sentinel/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace sentinel::eval {

Metrics Metrics::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    const auto dtp = static_cast<double>(tp);
    if (tp + fp > 0) m.precision = dtp / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = dtp / static_cast<double>(tp + fn);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f_score = 2.0 * (*m.precision) * (*m.recall) / (*m.precision + *m.recall);
    return m;
}

Metrics match_detections(std::span<const std::int64_t> reported,
                         std::span<const GroundTruth> truth, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("match_detections: k must be >= 0");

    std::vector<GroundTruth> sorted(truth.begin(), truth.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const GroundTruth& a, const GroundTruth& b) { return a.start < b.start; });
    for (const auto& g : sorted)
        if (g.end < g.start)
            throw std::invalid_argument("match_detections: interval end before start");
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].start <= sorted[i - 1].end)
            throw std::invalid_argument("match_detections: overlapping truth intervals");

    std::vector<std::int64_t> points(reported.begin(), reported.end());
    std::sort(points.begin(), points.end());

    // Match window: single points get slack on both sides, collective
    // anomalies only before their start.
    const auto window_of = [k](const GroundTruth& g) {
        return std::pair<std::int64_t, std::int64_t>{
            g.start - k, g.start == g.end ? g.start + k : g.end};
    };

    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    for (const auto& g : sorted) {
        const auto [lo, hi] = window_of(g);
        const auto it = std::lower_bound(points.begin(), points.end(), lo);
        const bool detected = it != points.end() && *it <= hi;
        if (detected)
            tp += static_cast<std::uint64_t>(g.point_count());
        else
            fn += static_cast<std::uint64_t>(g.point_count());
    }

    std::uint64_t fp = 0;
    for (const std::int64_t t : points) {
        bool covered = false;
        for (const auto& g : sorted) {
            const auto [lo, hi] = window_of(g);
            if (t >= lo && t <= hi) {
                covered = true;
                break;
            }
        }
        if (!covered) ++fp;
    }

    return Metrics::from_counts(tp, fp, fn);
}

std::pair<std::uint64_t, std::uint64_t> compare_fp(
    std::span<const std::int64_t> joint_reported,
    std::span<const std::int64_t> individual_reported,
    std::span<const GroundTruth> truth, std::int64_t k) {
    const Metrics joint = match_detections(joint_reported, truth, k);
    const Metrics individual = match_detections(individual_reported, truth, k);
    return {joint.fp, individual.fp};
}

} // namespace sentinel::eval
