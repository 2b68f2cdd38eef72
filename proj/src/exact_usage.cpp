#include "edgesched/exact_usage.hpp"

#include <algorithm>

namespace edgesched {

int peak_core_usage(std::span<const Allocation> workload, const TimeWindow& window) {
    // sweep over the start points of overlapping allocations plus the window
    // start itself; usage is constant between them
    int peak = 0;
    auto usage_at = [&](double t) {
        int used = 0;
        for (const Allocation& a : workload)
            if (a.processing_window.t1 <= t && t < a.processing_window.t2)
                used += a.cores;
        return used;
    };
    peak = usage_at(window.t1);
    for (const Allocation& a : workload) {
        const double t = a.processing_window.t1;
        if (t > window.t1 && t < window.t2)
            peak = std::max(peak, usage_at(t));
    }
    return peak;
}

std::optional<double> earliest_core_fit(std::span<const Allocation> workload,
                                        int total_cores, int cores,
                                        double duration, double earliest,
                                        double deadline) {
    if (cores > total_cores)
        return std::nullopt;
    std::vector<double> candidates{earliest};
    for (const Allocation& a : workload)
        if (a.processing_window.t2 > earliest)
            candidates.push_back(a.processing_window.t2);
    std::sort(candidates.begin(), candidates.end());
    for (double s : candidates) {
        if (s + duration > deadline)
            return std::nullopt;
        if (peak_core_usage(workload, TimeWindow{s, s + duration}) + cores <=
            total_cores)
            return s;
    }
    return std::nullopt;
}

double earliest_link_gap(std::span<const TimeWindow> busy, double earliest,
                         double duration) {
    std::vector<TimeWindow> sorted(busy.begin(), busy.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const TimeWindow& a, const TimeWindow& b) { return a.t1 < b.t1; });
    double candidate = earliest;
    for (const TimeWindow& w : sorted) {
        if (w.t2 <= candidate)
            continue;
        if (w.t1 >= candidate + duration)
            break;  // gap before this interval fits
        candidate = w.t2;
    }
    return candidate;
}

} // namespace edgesched
