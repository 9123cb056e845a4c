#include "sentinel/coordinator.hpp"

#include <condition_variable>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sentinel::fuse {

/// One worker thread per detector. Each step the main thread publishes the
/// sample and a new generation; workers run their own detector and the last
/// one to finish releases the barrier. Workers never touch each other's
/// state, so verdicts are identical to a sequential sweep.
class DetectorPool {
public:
    explicit DetectorPool(std::vector<detect::LadDetector>& detectors)
        : detectors_(detectors), verdicts_(detectors.size()), errors_(detectors.size()) {
        threads_.reserve(detectors_.size());
        for (std::size_t i = 0; i < detectors_.size(); ++i)
            threads_.emplace_back([this, i] { worker(i); });
    }

    ~DetectorPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
            ++generation_;
        }
        start_cv_.notify_all();
        for (auto& th : threads_) th.join();
    }

    std::vector<detect::Verdict> run_step(const std::vector<double>& values, std::uint64_t t) {
        verdicts_.assign(detectors_.size(), {});
        {
            std::lock_guard lock(mutex_);
            values_ = &values;
            t_ = t;
            pending_ = detectors_.size();
            ++generation_;
        }
        start_cv_.notify_all();
        {
            std::unique_lock lock(mutex_);
            done_cv_.wait(lock, [this] { return pending_ == 0; });
        }
        for (std::size_t i = 0; i < errors_.size(); ++i) {
            if (!errors_[i]) continue;
            auto err = errors_[i];
            for (auto& e : errors_) e = nullptr;
            try {
                std::rethrow_exception(err);
            } catch (const std::exception& ex) {
                throw std::runtime_error("detector " + std::to_string(i) +
                                         " failed: " + ex.what());
            }
        }
        return std::move(verdicts_);
    }

private:
    void worker(std::size_t index) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::vector<double>* values = nullptr;
            std::uint64_t t = 0;
            {
                std::unique_lock lock(mutex_);
                start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                values = values_;
                t = t_;
            }
            try {
                verdicts_[index] = detectors_[index].step((*values)[index], t);
            } catch (...) {
                errors_[index] = std::current_exception();
            }
            {
                std::lock_guard lock(mutex_);
                if (--pending_ == 0) done_cv_.notify_one();
            }
        }
    }

    std::vector<detect::LadDetector>& detectors_;
    std::vector<detect::Verdict> verdicts_;
    std::vector<std::exception_ptr> errors_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::vector<double>* values_ = nullptr;
    std::uint64_t t_ = 0;
    std::uint64_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stop_ = false;
};

Coordinator::Coordinator(CoordinatorConfig cfg)
    : cfg_(cfg), tracker_(cfg.n_variables, cfg.history_capacity) {
    if (cfg_.n_variables < 1) throw std::invalid_argument("coordinator: need >= 1 variable");
    if (cfg_.thd_pos <= 0.0 || cfg_.thd_pos > 1.0)
        throw std::invalid_argument("coordinator: thd_pos must be in (0, 1]");
    detectors_.reserve(cfg_.n_variables);
    for (std::size_t i = 0; i < cfg_.n_variables; ++i) {
        detect::LadDetector::Config dc;
        dc.variable_id = i;
        dc.window = cfg_.detector_window;
        dc.hidden_size = cfg_.hidden_size;
        dc.seed = cfg_.seed;
        dc.epsilon = cfg_.epsilon;
        dc.training = cfg_.training;
        detectors_.emplace_back(dc);
    }
    if (cfg_.parallel && cfg_.n_variables > 1)
        pool_ = std::make_unique<DetectorPool>(detectors_);
}

Coordinator::~Coordinator() = default;

StepResult Coordinator::process_timestep(const MultivariateSample& sample) {
    if (sample.values.size() != detectors_.size())
        throw std::invalid_argument("coordinator: sample arity " +
                                    std::to_string(sample.values.size()) + ", expected " +
                                    std::to_string(detectors_.size()));
    if (sample.t != next_t_)
        throw std::invalid_argument("coordinator: out-of-order sample t=" +
                                    std::to_string(sample.t));

    StepResult result;
    result.t = sample.t;

    // Fan-out; polling must not start until every verdict exists.
    if (pool_) {
        result.verdicts = pool_->run_step(sample.values, sample.t);
    } else {
        result.verdicts.reserve(detectors_.size());
        for (std::size_t i = 0; i < detectors_.size(); ++i) {
            try {
                result.verdicts.push_back(detectors_[i].step(sample.values[i], sample.t));
            } catch (const std::exception& ex) {
                throw std::runtime_error("detector " + std::to_string(i) +
                                         " failed: " + ex.what());
            }
        }
    }

    std::vector<detect::Status> statuses;
    statuses.reserve(result.verdicts.size());
    bool any_anomalous = false;
    for (const auto& v : result.verdicts) {
        statuses.push_back(v.status);
        any_anomalous |= v.status == detect::Status::Anomalous;
    }

    if (any_anomalous) {
        // Each unordered pair is evaluated at most once per time step; the
        // tracker still holds only points before `sample.t`, so windows end
        // at the previous point.
        const std::size_t n = detectors_.size();
        std::vector<std::optional<std::optional<double>>> cache(n * n);
        CorrelationFn correlation = [&](std::size_t a, std::size_t b) {
            const std::size_t key = std::min(a, b) * n + std::max(a, b);
            if (!cache[key]) cache[key] = tracker_.pearson(a, b);
            return *cache[key];
        };
        result.polls = poll_timestep(statuses, sample.values, correlation, cfg_.thd_pos);
        result.report = consolidate(sample.t, sample.timestamp, result.polls);
    }

    tracker_.push_sample(sample.values);
    ++next_t_;
    return result;
}

} // namespace sentinel::fuse
