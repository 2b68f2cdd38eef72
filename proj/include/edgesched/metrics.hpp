#ifndef EDGESCHED_METRICS_HPP
#define EDGESCHED_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace edgesched {

/// Aggregated outcome of one simulation run. Latencies are kept in seconds
/// internally; emitted outputs convert to milliseconds.
struct RunReport {
    std::string scheduler;
    std::uint64_t seed = 0;
    std::string trace;
    double duration_s = 0.0;
    double bw_interval_s = 0.0;
    double duty_cycle = 0.0;

    std::uint64_t frames_total = 0;
    std::uint64_t frames_completed = 0;

    std::uint64_t hp_spawned = 0;
    std::uint64_t hp_completed = 0;
    std::uint64_t hp_alloc_direct = 0;
    std::uint64_t hp_alloc_via_preempt = 0;
    std::uint64_t hp_rejected = 0;
    std::uint64_t hp_violated = 0;
    double hp_mean_latency_direct_s = 0.0;
    double hp_mean_latency_preempt_s = 0.0;

    std::uint64_t lp_spawned = 0;
    std::uint64_t lp_completed = 0;
    std::uint64_t lp_violated = 0;
    std::uint64_t lp_rejected = 0;
    std::uint64_t lp_reallocated = 0;
    double lp_mean_initial_latency_s = 0.0;
    double lp_mean_realloc_latency_s = 0.0;

    std::uint64_t offloaded_count = 0;
    std::uint64_t offloaded_completed = 0;

    std::uint64_t alloc_two_core = 0;
    std::uint64_t alloc_four_core = 0;

    std::vector<std::pair<double, double>> bandwidth_series;  // (t, bps)

    double frame_completion_rate() const {
        return frames_total ? static_cast<double>(frames_completed) /
                                  static_cast<double>(frames_total)
                            : 0.0;
    }
    double offloaded_completion_rate() const {
        return offloaded_count ? static_cast<double>(offloaded_completed) /
                                     static_cast<double>(offloaded_count)
                               : 0.0;
    }
    double two_core_fraction() const {
        const auto total = alloc_two_core + alloc_four_core;
        return total ? static_cast<double>(alloc_two_core) /
                           static_cast<double>(total)
                     : 0.0;
    }
    double four_core_fraction() const {
        const auto total = alloc_two_core + alloc_four_core;
        return total ? static_cast<double>(alloc_four_core) /
                           static_cast<double>(total)
                     : 0.0;
    }
};

/// Fold a run log (one JSON record per line) into a report. Pure function of
/// the log bytes; malformed input raises std::runtime_error naming the line.
RunReport aggregate(std::istream& log);
RunReport aggregate_file(const std::string& path);

/// JSON document mirroring the CSV columns (plus the bandwidth series).
std::string report_to_json(const RunReport& report);
RunReport report_from_json(std::istream& in);

/// Stable column order; one row per run.
std::string summary_csv_header();
std::string summary_csv_row(const std::string& run_id, const RunReport& report);

/// Long-format per-category counts, one file across runs.
std::string breakdown_csv_header();
std::string breakdown_csv_rows(const std::string& run_id, const RunReport& report);

} // namespace edgesched

#endif
