#include <doctest.h>

#include <thread>

#include "fastker/errors.hpp"
#include "fastker/tracking.hpp"

using namespace fastker;

namespace {

// Straight transcription of the stop rule: compare the last interval's rate with
// the average rate since the first sample.
std::int64_t first_trigger(const std::vector<std::int64_t>& removed, double dt, double threshold) {
    for (std::size_t i = 1; i < removed.size(); ++i) {
        const double recent = double(removed[i] - removed[i - 1]) / dt;
        const double average = double(removed[i] - removed[0]) / (dt * double(i));
        if (recent < threshold * average) return std::int64_t(i);
    }
    return -1;
}

}  // namespace

TEST_SUITE("tracking") {

TEST_CASE("threshold must be a proper fraction") {
    CHECK_THROWS_AS(ReductionTracker(0.0), UsageError);
    CHECK_THROWS_AS(ReductionTracker(1.0), UsageError);
    CHECK_NOTHROW(ReductionTracker(0.05));
}

TEST_CASE("constant rate never stops") {
    std::vector<std::int64_t> trace;
    for (int i = 0; i < 100; ++i) trace.push_back(50 * i);
    CHECK(replay_trigger(trace, 0.01, 0.05) == -1);
    CHECK(replay_trigger(trace, 0.01, 0.99) == -1);
}

TEST_CASE("rate drop to zero stops at the next sample") {
    std::vector<std::int64_t> trace{0, 100, 200, 300, 300, 300};
    CHECK(replay_trigger(trace, 0.01, 0.05) == 4);
}

TEST_CASE("synthetic decaying trace matches the replayed formula") {
    // Graph sizes 1000, 900, ..., 800 then slowly 790, 789, ...
    std::vector<std::int64_t> sizes{1000, 900, 800};
    for (std::int64_t s = 790; s > 700; --s) sizes.push_back(s);
    std::vector<std::int64_t> removed;
    for (auto s : sizes) removed.push_back(1000 - s);
    const auto want = first_trigger(removed, 0.01, 0.05);
    CHECK(want > 0);
    CHECK(replay_trigger(removed, 0.01, 0.05) == want);

    ReductionTracker tracker(0.05);
    tracker.start(0.0, removed[0]);
    std::int64_t fired = -1;
    for (std::size_t i = 1; i < removed.size(); ++i) {
        if (tracker.sample(0.01 * double(i), removed[i])) {
            fired = std::int64_t(i);
            break;
        }
    }
    CHECK(fired == want);
}

TEST_CASE("stop signal is sticky until reset") {
    StopSignal s;
    CHECK_FALSE(s.raised());
    s.raise(StopReason::Tracking);
    CHECK(s.raised());
    CHECK(s.reason() == StopReason::Tracking);
    s.raise(StopReason::External);
    CHECK(s.raised());
    s.reset();
    CHECK_FALSE(s.raised());
    CHECK(s.reason() == StopReason::None);
}

TEST_CASE("monitor thread raises the stop when progress stalls") {
    ReductionTracker tracker(0.5);
    StopSignal stop;
    std::atomic<std::int64_t> removed{0};
    const auto origin = std::chrono::steady_clock::now();
    tracker.start(0.0, 0);
    {
        TrackingMonitor monitor(tracker, [&] { return removed.load(); }, stop,
                                std::chrono::microseconds(1000), origin);
        // Fast progress, then nothing.
        for (int i = 0; i < 20; ++i) {
            removed += 100;
            std::this_thread::sleep_for(std::chrono::microseconds(300));
        }
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
        while (!stop.raised() && std::chrono::steady_clock::now() < deadline)
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    CHECK(stop.raised());
    CHECK(stop.reason() == StopReason::Tracking);
    CHECK(tracker.samples().size() >= 2);
}

TEST_CASE("sampler returns when the phase ends") {
    ReductionTracker tracker(0.05);
    StopSignal stop;
    std::atomic<bool> busy{true};
    tracker.start(0.0, 0);
    std::thread ender([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        busy = false;
    });
    std::int64_t count = 0;
    run_sampler(tracker, [&] { return ++count; }, stop, std::chrono::microseconds(1000),
                [&] { return busy.load(); }, std::chrono::steady_clock::now());
    ender.join();
    CHECK_FALSE(stop.raised());
}

}
