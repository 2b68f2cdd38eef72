#ifndef EDGESCHED_EXACT_USAGE_HPP
#define EDGESCHED_EXACT_USAGE_HPP

#include <optional>
#include <span>
#include <vector>

#include "edgesched/device.hpp"
#include "edgesched/time_window.hpp"

namespace edgesched {

// Exact per-instant accounting over a raw workload. Core usage is piecewise
// constant with steps at allocation boundaries, so the sweeps below visit
// only those points. This is the overlapping-range-search path: correct,
// and linear in the workload size on every query.

/// Peak concurrent core usage inside `window`.
int peak_core_usage(std::span<const Allocation> workload, const TimeWindow& window);

/// Earliest start no sooner than `earliest` such that `cores` extra cores fit
/// for `duration` seconds without exceeding `total_cores`, finishing by
/// `deadline`. Usage only falls at allocation end times, so candidates are
/// `earliest` and those end times.
std::optional<double> earliest_core_fit(std::span<const Allocation> workload,
                                        int total_cores, int cores,
                                        double duration, double earliest,
                                        double deadline);

/// Earliest gap of `duration` seconds starting at or after `earliest` in a
/// set of busy intervals (exclusive use of the link).
double earliest_link_gap(std::span<const TimeWindow> busy, double earliest,
                         double duration);

} // namespace edgesched

#endif
