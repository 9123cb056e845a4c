#include "sentinel/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sentinel::corr {

namespace {

std::optional<double> coefficient_from_sums(double n, double sa, double sb, double saa,
                                            double sbb, double sab) {
    if (n < 2.0) return std::nullopt;
    const double var_a = n * saa - sa * sa;
    const double var_b = n * sbb - sb * sb;
    if (var_a <= 0.0 || var_b <= 0.0) return std::nullopt;
    const double r = (n * sab - sa * sb) / (std::sqrt(var_a) * std::sqrt(var_b));
    return std::clamp(r, -1.0, 1.0);
}

} // namespace

VariableHistory::VariableHistory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 2) throw std::invalid_argument("history: capacity must be >= 2");
    buffer_.reserve(capacity_);
}

void VariableHistory::push(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("history: non-finite value");
    if (count_seen_ == 0) offset_ = value;

    if (buffer_.size() < capacity_) {
        buffer_.push_back(value);
    } else {
        const double old = buffer_[head_] - offset_;
        sum_.add(-old);
        sum_sq_.add(-old * old);
        buffer_[head_] = value;
        head_ = (head_ + 1) % capacity_;
    }
    const double shifted = value - offset_;
    sum_.add(shifted);
    sum_sq_.add(shifted * shifted);
    ++count_seen_;
}

double VariableHistory::at(std::size_t i) const {
    if (i >= buffer_.size()) throw std::out_of_range("history: index past window");
    return buffer_[(head_ + i) % buffer_.size()];
}

std::vector<double> VariableHistory::values() const {
    std::vector<double> out;
    out.reserve(buffer_.size());
    for (std::size_t i = 0; i < buffer_.size(); ++i) out.push_back(at(i));
    return out;
}

std::optional<double> pearson(const VariableHistory& a, const VariableHistory& b) {
    if (a.count_seen() != b.count_seen())
        throw std::invalid_argument("pearson: histories fed different point counts");
    const std::size_t n = a.size();
    if (n != b.size()) throw std::invalid_argument("pearson: window sizes differ");
    if (n < 2) return std::nullopt;

    CompensatedSum cross;
    for (std::size_t i = 0; i < n; ++i)
        cross.add((a.at(i) - a.offset()) * (b.at(i) - b.offset()));

    return coefficient_from_sums(static_cast<double>(n), a.shifted_sum(), b.shifted_sum(),
                                 a.shifted_sum_sq(), b.shifted_sum_sq(), cross.value());
}

bool is_highly_correlated(std::optional<double> coefficient, double thd_pos) {
    if (thd_pos <= 0.0 || thd_pos > 1.0)
        throw std::invalid_argument("is_highly_correlated: thd_pos must be in (0, 1]");
    if (!coefficient) return false;
    return *coefficient >= thd_pos || *coefficient <= -thd_pos;
}

CorrelationTracker::CorrelationTracker(std::size_t n_variables, std::size_t capacity)
    : capacity_(capacity) {
    if (n_variables < 1) throw std::invalid_argument("tracker: need at least one variable");
    histories_.reserve(n_variables);
    for (std::size_t i = 0; i < n_variables; ++i) histories_.emplace_back(capacity);
    cross_.resize(n_variables * (n_variables - 1) / 2);
}

std::size_t CorrelationTracker::pair_index(std::size_t a, std::size_t b) const {
    const std::size_t n = histories_.size();
    if (a > b) std::swap(a, b);
    // Row-major upper triangle: pairs (a, a+1..n-1) precede row a+1.
    return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

void CorrelationTracker::push_sample(std::span<const double> values) {
    const std::size_t n = histories_.size();
    if (values.size() != n)
        throw std::invalid_argument("tracker: sample arity does not match variable count");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("tracker: non-finite value");

    // Cross terms for evicted rows must be removed before the histories
    // overwrite their oldest slots.
    const bool evict = histories_[0].size() == capacity_;
    if (evict) {
        for (std::size_t a = 0; a < n; ++a) {
            const double sa = histories_[a].oldest() - histories_[a].offset();
            for (std::size_t b = a + 1; b < n; ++b) {
                const double sb = histories_[b].oldest() - histories_[b].offset();
                cross_[pair_index(a, b)].add(-sa * sb);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) histories_[i].push(values[i]);
    for (std::size_t a = 0; a < n; ++a) {
        const double sa = values[a] - histories_[a].offset();
        for (std::size_t b = a + 1; b < n; ++b) {
            const double sb = values[b] - histories_[b].offset();
            cross_[pair_index(a, b)].add(sa * sb);
        }
    }
    ++count_seen_;
}

std::optional<double> CorrelationTracker::pearson(std::size_t a, std::size_t b) const {
    const std::size_t n_vars = histories_.size();
    if (a >= n_vars || b >= n_vars) throw std::out_of_range("tracker: variable index");
    if (a == b) throw std::invalid_argument("tracker: correlation of a variable with itself");

    const auto& ha = histories_[a];
    const auto& hb = histories_[b];
    const std::size_t n = ha.size();
    if (n < 2) return std::nullopt;
    return coefficient_from_sums(static_cast<double>(n), ha.shifted_sum(), hb.shifted_sum(),
                                 ha.shifted_sum_sq(), hb.shifted_sum_sq(),
                                 cross_[pair_index(a, b)].value());
}

} // namespace sentinel::corr
