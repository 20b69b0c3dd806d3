#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fastker {

enum class StopReason : std::uint8_t { None, Tracking, External };

/// Stop flag shared by the workers of one local phase. Once raised it stays
/// raised until reset() at the next phase.
class StopSignal {
public:
    void raise(StopReason reason);
    bool raised() const { return raised_.load(std::memory_order_acquire); }
    StopReason reason() const { return reason_.load(std::memory_order_acquire); }
    void reset();
    const std::atomic<bool>& flag() const { return raised_; }

private:
    std::atomic<bool> raised_{false};
    std::atomic<StopReason> reason_{StopReason::None};
};

struct TrackingSample {
    double seconds = 0.0;
    std::int64_t removed = 0;
};

/// Rate rule: stop once the removals of the last interval, per second, fall below
/// `threshold` times the average removals per second since the phase started.
class ReductionTracker {
public:
    explicit ReductionTracker(double threshold);

    /// First sample; the phase start.
    void start(double seconds, std::int64_t removed);
    /// Records a sample and returns true when the phase should stop.
    bool sample(double seconds, std::int64_t removed);

    const std::vector<TrackingSample>& samples() const { return samples_; }
    double threshold() const { return threshold_; }

private:
    double threshold_;
    std::vector<TrackingSample> samples_;
};

/// Replays the rule over a trace of cumulative removal counts taken at a fixed
/// interval. Returns the index of the sample that raises the stop, or -1.
std::int64_t replay_trigger(const std::vector<std::int64_t>& removed_trace, double interval_seconds,
                            double threshold);

/// Samples `removed()` every `interval` on its own thread until finish() or until
/// the tracker raises `stop`. The tracker must already hold the phase-start sample,
/// taken at `origin`.
class TrackingMonitor {
public:
    TrackingMonitor(ReductionTracker& tracker, std::function<std::int64_t()> removed,
                    StopSignal& stop, std::chrono::microseconds interval,
                    std::chrono::steady_clock::time_point origin);
    ~TrackingMonitor();
    TrackingMonitor(const TrackingMonitor&) = delete;
    TrackingMonitor& operator=(const TrackingMonitor&) = delete;

    void finish();

private:
    void run();

    ReductionTracker& tracker_;
    std::function<std::int64_t()> removed_;
    StopSignal& stop_;
    std::chrono::microseconds interval_;
    std::chrono::steady_clock::time_point origin_;
    std::atomic<bool> done_{false};
    std::thread thread_;
};

/// Sampling loop, run by the monitor thread or inline by the first worker that
/// runs out of blocks. Times are measured from `origin`, the phase start. Returns
/// when `busy()` turns false or the stop is raised.
void run_sampler(ReductionTracker& tracker, const std::function<std::int64_t()>& removed,
                 StopSignal& stop, std::chrono::microseconds interval,
                 const std::function<bool()>& busy,
                 std::chrono::steady_clock::time_point origin);

double seconds_since(std::chrono::steady_clock::time_point origin);

}  // namespace fastker
