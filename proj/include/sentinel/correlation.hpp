#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sentinel::corr {

/// Neumaier-compensated accumulator; tolerates mixed-magnitude adds and the
/// subtractions caused by window eviction.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Ring buffer of the most recent `capacity` raw points of one variable,
/// with running first and second moments maintained alongside.
///
/// Internally every point is re-centered by the first value ever observed
/// before entering the sums. A constant shift leaves the correlation
/// coefficient unchanged and keeps the raw-moment arithmetic away from
/// catastrophic cancellation when a series has a large offset.
class VariableHistory {
public:
    explicit VariableHistory(std::size_t capacity);

    /// Appends a finite value, evicting the oldest once full.
    void push(double value);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return buffer_.size(); }
    std::uint64_t count_seen() const { return count_seen_; }

    /// Window entry, index 0 = oldest retained point, returned raw.
    double at(std::size_t i) const;
    double oldest() const { return at(0); }

    /// Window contents oldest to newest.
    std::vector<double> values() const;

    double offset() const { return offset_; }
    double shifted_sum() const { return sum_.value(); }
    double shifted_sum_sq() const { return sum_sq_.value(); }

private:
    std::size_t capacity_;
    std::vector<double> buffer_;  // ring once full
    std::size_t head_ = 0;        // index of oldest entry
    std::uint64_t count_seen_ = 0;
    double offset_ = 0.0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

/// Windowed Pearson coefficient of two equally fed histories, clamped to
/// [-1, 1]. nullopt when fewer than two points are retained or either series
/// has zero variance over the window. The cross sum is accumulated on
/// demand; per-variable moments come from the maintained sums.
std::optional<double> pearson(const VariableHistory& a, const VariableHistory& b);

/// True iff the coefficient is defined and beyond +-thd_pos.
bool is_highly_correlated(std::optional<double> coefficient, double thd_pos);

/// Histories for all variables of a stream plus incrementally maintained
/// pairwise cross sums, so any pairwise coefficient is O(1) at poll time.
class CorrelationTracker {
public:
    CorrelationTracker(std::size_t n_variables, std::size_t capacity);

    /// Appends one observation per variable; values.size() must equal
    /// n_variables().
    void push_sample(std::span<const double> values);

    std::optional<double> pearson(std::size_t a, std::size_t b) const;

    std::size_t n_variables() const { return histories_.size(); }
    std::uint64_t count_seen() const { return count_seen_; }
    const VariableHistory& history(std::size_t i) const { return histories_[i]; }

private:
    std::size_t pair_index(std::size_t a, std::size_t b) const;

    std::size_t capacity_;
    std::vector<VariableHistory> histories_;
    std::vector<CompensatedSum> cross_;  // upper triangle, a < b
    std::uint64_t count_seen_ = 0;
};

} // namespace sentinel::corr
