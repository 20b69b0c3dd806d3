#include "fastker/tracking.hpp"

#include <algorithm>

#include "fastker/errors.hpp"

namespace fastker {

void StopSignal::raise(StopReason reason) {
    StopReason expected = StopReason::None;
    reason_.compare_exchange_strong(expected, reason, std::memory_order_acq_rel);
    raised_.store(true, std::memory_order_release);
}

void StopSignal::reset() {
    raised_.store(false, std::memory_order_release);
    reason_.store(StopReason::None, std::memory_order_release);
}

ReductionTracker::ReductionTracker(double threshold) : threshold_(threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw UsageError("tracking threshold must lie strictly between 0 and 1");
    }
}

void ReductionTracker::start(double seconds, std::int64_t removed) {
    samples_.clear();
    samples_.push_back({seconds, removed});
}

bool ReductionTracker::sample(double seconds, std::int64_t removed) {
    if (samples_.empty()) {
        start(seconds, removed);
        return false;
    }
    const TrackingSample first = samples_.front();
    const TrackingSample last = samples_.back();
    samples_.push_back({seconds, removed});
    const double dt = seconds - last.seconds;
    const double elapsed = seconds - first.seconds;
    if (dt <= 0.0 || elapsed <= 0.0) return false;
    const double recent = static_cast<double>(removed - last.removed) / dt;
    const double average = static_cast<double>(removed - first.removed) / elapsed;
    return recent < threshold_ * average;
}

std::int64_t replay_trigger(const std::vector<std::int64_t>& removed_trace, double interval_seconds,
                            double threshold) {
    ReductionTracker tracker(threshold);
    for (std::size_t i = 0; i < removed_trace.size(); ++i) {
        const double t = interval_seconds * static_cast<double>(i);
        if (i == 0) {
            tracker.start(t, removed_trace[0]);
        } else if (tracker.sample(t, removed_trace[i])) {
            return static_cast<std::int64_t>(i);
        }
    }
    return -1;
}

double seconds_since(std::chrono::steady_clock::time_point origin) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin).count();
}

void run_sampler(ReductionTracker& tracker, const std::function<std::int64_t()>& removed,
                 StopSignal& stop, std::chrono::microseconds interval,
                 const std::function<bool()>& busy,
                 std::chrono::steady_clock::time_point origin) {
    while (busy() && !stop.raised()) {
        if (tracker.sample(seconds_since(origin), removed())) {
            stop.raise(StopReason::Tracking);
            break;
        }
        // Sleep in short slices so the phase end is noticed promptly.
        const auto wake = std::chrono::steady_clock::now() + interval;
        while (busy() && std::chrono::steady_clock::now() < wake) {
            const auto left = wake - std::chrono::steady_clock::now();
            std::this_thread::sleep_for(
                std::min<std::chrono::steady_clock::duration>(left, std::chrono::microseconds(500)));
        }
    }
}

TrackingMonitor::TrackingMonitor(ReductionTracker& tracker, std::function<std::int64_t()> removed,
                                 StopSignal& stop, std::chrono::microseconds interval,
                                 std::chrono::steady_clock::time_point origin)
    : tracker_(tracker), removed_(std::move(removed)), stop_(stop), interval_(interval),
      origin_(origin) {
    thread_ = std::thread([this] { run(); });
}

TrackingMonitor::~TrackingMonitor() { finish(); }

void TrackingMonitor::finish() {
    done_.store(true, std::memory_order_release);
    if (thread_.joinable()) thread_.join();
}

void TrackingMonitor::run() {
    run_sampler(tracker_, removed_, stop_, interval_,
                [this] { return !done_.load(std::memory_order_acquire); }, origin_);
}

}  // namespace fastker
