// Decision-latency benchmark: the availability scheduler against the
// exhaustive baseline on identical pre-loaded states, plus the parallel
// versus serial device-query phase.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgesched/scheduler.hpp"

using namespace edgesched;

namespace {

std::vector<Device> network(int n) {
    std::vector<Device> devices;
    for (int d = 0; d < n; ++d)
        devices.push_back(Device{d, 4});
    return devices;
}

// Spread `count` two-core allocations across the devices over a horizon wide
// enough to hold them all.
template <typename Sched>
void preload(Sched& sched, int count, int devices) {
    const double spacing = 20.0;
    for (int i = 0; i < count; ++i) {
        const DeviceId dev = i % devices;
        const double start = static_cast<double>(i / devices) * spacing;
        sched.inject_allocation(
            Allocation{static_cast<TaskId>(1000 + i), dev, 2,
                       TimeWindow{start, start + 16.862}, std::nullopt, 0},
            Priority::Low, start + 40.0);
    }
}

LpRequest request_at(double now, DeviceId source, std::size_t k) {
    LpRequest req;
    req.source = source;
    req.deadline = now + 18.0;
    req.issue_time = now;
    for (std::size_t i = 0; i < k; ++i)
        req.tasks.push_back(LpTaskSpec{900 + i, 2e6});
    return req;
}

template <typename Sched>
double median_decision_us(const Sched& prototype, const LpRequest& req,
                          double now, int trials) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        Sched copy = prototype;  // decisions mutate state; measure on a copy
        const auto d = copy.schedule_low_priority(req, now);
        samples.push_back(d.latency_s * 1e6);
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scheduler decision latency benchmark"};
    int trials = 31;
    app.add_option("--trials", trials, "runs per measurement");
    CLI11_PARSE(app, argc, argv);

    std::printf("decision latency, low-priority request of 2 tasks (median of %d)\n",
                trials);
    std::printf("%12s %16s %16s\n", "allocations", "availability/us",
                "exhaustive/us");
    for (int n : {10, 100, 1000}) {
        const double horizon = 40.0 + 20.0 * (n / 4 + 1);
        RasScheduler ras(network(4), 0.0, 8e6, TimeWindow{0.0, horizon});
        WpsScheduler wps(network(4), 0.0, 8e6);
        preload(ras, n, 4);
        preload(wps, n, 4);
        const double now = 1.0;
        const LpRequest req = request_at(now, 0, 2);
        const double ras_us = median_decision_us(ras, req, now, trials);
        const double wps_us = median_decision_us(wps, req, now, trials);
        std::printf("%12d %16.1f %16.1f\n", n, ras_us, wps_us);
    }

    std::printf("\nfork-join device query, 64 devices, 1 allocation each\n");
    for (bool parallel : {false, true}) {
        SchedulerConfig cfg;
        cfg.parallel_query = parallel;
        RasScheduler ras(network(64), 0.0, 8e6, TimeWindow{0.0, 4000.0}, cfg);
        preload(ras, 640, 64);
        const LpRequest req = request_at(1.0, 0, 4);
        const double us = median_decision_us(ras, req, 1.0, trials);
        std::printf("  %s query: %.1f us\n", parallel ? "parallel" : "serial  ",
                    us);
    }
    return 0;
}
