#ifndef EDGESCHED_TEST_HELPERS_HPP
#define EDGESCHED_TEST_HELPERS_HPP

#include <optional>
#include <sstream>
#include <vector>

#include "edgesched/availability.hpp"
#include "edgesched/exact_usage.hpp"
#include "edgesched/network_link.hpp"
#include "edgesched/rng.hpp"

namespace edgesched::testing {

/// Scan-everything reference for find_window: first track, first window, no
/// early exit tricks.
inline std::optional<AvailabilityWindow> find_window_by_scan(
    const AvailabilityList& list, const TimeWindow& desired) {
    const auto& tracks = list.tracks();
    for (int t = 0; t < static_cast<int>(tracks.size()); ++t)
        for (const TimeWindow& w : tracks[static_cast<std::size_t>(t)])
            if (window_contains(w, desired))
                return AvailabilityWindow{w, t};
    return std::nullopt;
}

/// Reference for query_index: round the time point up to the next slot
/// boundary (exact multiples advance a full slot), then walk the actual
/// bucket windows for the one containing it. Returns -1 for "in the past",
/// buckets().size() for "beyond the horizon".
inline int bucket_index_by_scan(const NetworkLink& link, double t_p) {
    const double unit = link.transfer_unit();
    const double t_r = link.reasoning_time();
    const double delta = t_p - t_r;
    const double slots_up = static_cast<double>(
        std::llround((delta + (unit - std::fmod(delta, unit))) / unit));
    const double rounded = t_r + slots_up * unit;
    if (rounded < t_r)
        return -1;
    for (const Bucket& b : link.buckets())
        if (b.window.t1 <= rounded && rounded < b.window.t2)
            return b.index;
    return static_cast<int>(link.buckets().size());
}

/// True when the device could really host `cores` more cores across `slot`,
/// judged from the raw workload alone.
inline bool fits_exactly(const std::vector<Allocation>& workload, int total_cores,
                         int cores, const TimeWindow& slot) {
    return peak_core_usage(workload, slot) + cores <= total_cores;
}

inline std::string dump_tracks(const AvailabilityList& list) {
    std::ostringstream os;
    for (const auto& track : list.tracks()) {
        os << "|";
        for (const TimeWindow& w : track)
            os << " [" << w.t1 << "," << w.t2 << ")";
    }
    return os.str();
}

} // namespace edgesched::testing

#endif
