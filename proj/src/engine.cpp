#include "sentinel/engine.hpp"

#include "sentinel/report_io.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace sentinel::engine {

namespace {

/// Single-producer single-consumer bounded queue; push blocks when full.
class SampleQueue {
public:
    explicit SampleQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(MultivariateSample sample) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [this] { return items_.size() < capacity_ || aborted_; });
        if (aborted_) return;
        items_.push_back(std::move(sample));
        not_empty_.notify_one();
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
    }

    void abort() {
        std::lock_guard lock(mutex_);
        aborted_ = true;
        closed_ = true;
        not_full_.notify_all();
        not_empty_.notify_all();
    }

    std::optional<MultivariateSample> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [this] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        MultivariateSample s = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return s;
    }

private:
    std::size_t capacity_;
    std::deque<MultivariateSample> items_;
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    bool closed_ = false;
    bool aborted_ = false;
};

// Running mean and population standard deviation (Welford).
class LatencyStats {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    double mean() const { return n_ ? mean_ : 0.0; }
    double stddev() const { return n_ ? std::sqrt(m2_ / static_cast<double>(n_)) : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace

RunSummary run_stream(ingest::SampleSource& source, fuse::Coordinator& coordinator,
                      const std::vector<std::string>& names, const RunOptions& options) {
    SampleQueue queue(options.queue_capacity);
    std::exception_ptr source_error;

    std::thread producer([&] {
        try {
            while (auto sample = source.next()) {
                if (options.stop && options.stop->load()) break;
                queue.push(std::move(*sample));
            }
        } catch (...) {
            source_error = std::current_exception();
        }
        queue.close();
    });

    RunSummary summary;
    LatencyStats latency;
    if (options.trace) io::write_trace_header(*options.trace);

    try {
        while (auto sample = queue.pop()) {
            if (options.stop && options.stop->load()) {
                summary.stopped_early = true;
                break;
            }
            const auto t0 = std::chrono::steady_clock::now();
            const fuse::StepResult step = coordinator.process_timestep(*sample);

            if (step.report && options.reports) {
                io::write_report_line(*options.reports, *step.report, names);
                options.reports->flush();
            }
            const auto t1 = std::chrono::steady_clock::now();
            latency.add(std::chrono::duration<double>(t1 - t0).count());

            ++summary.samples;
            if (step.report) ++summary.report_count;
            if (options.collect_time_points) {
                if (step.report)
                    summary.report_ts.push_back(static_cast<std::int64_t>(step.t));
                for (const auto& v : step.verdicts) {
                    if (v.status == detect::Status::Anomalous) {
                        summary.standalone_ts.push_back(static_cast<std::int64_t>(step.t));
                        break;
                    }
                }
            }
            if (options.trace)
                for (std::size_t i = 0; i < step.verdicts.size(); ++i)
                    io::write_trace_line(*options.trace, names[i], step.verdicts[i]);
        }
    } catch (...) {
        queue.abort();
        producer.join();
        throw;
    }

    queue.abort();
    producer.join();
    if (source_error) std::rethrow_exception(source_error);

    summary.latency_mean_s = latency.mean();
    summary.latency_std_s = latency.stddev();
    return summary;
}

} // namespace sentinel::engine
