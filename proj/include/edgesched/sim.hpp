#ifndef EDGESCHED_SIM_HPP
#define EDGESCHED_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "edgesched/availability.hpp"
#include "edgesched/task.hpp"
#include "edgesched/trace.hpp"

namespace edgesched {

enum class SchedulerKind { RAS, WPS };

const char* to_string(SchedulerKind k);
SchedulerKind scheduler_kind_from_string(const std::string& name);

/// Fixed per-operation scheduling latencies, used instead of measured
/// wall-clock time when runs must be machine-independent and repeatable.
struct LatencyTable {
    double hp_initial = 0.0;
    double hp_preempt = 0.0;
    double lp_initial = 0.0;
    double lp_realloc = 0.0;
    double bw_update = 0.0;
};

LatencyTable ras_reference_latencies();
LatencyTable wps_reference_latencies();

enum class LatencyModel { Measured, Reference };

struct SimConfig {
    std::string trace;
    SchedulerKind scheduler = SchedulerKind::RAS;
    double frame_period_s = kDefaultFramePeriod;
    double bw_interval_s = 30.0;
    double duty_cycle = 0.0;         // fraction of each interval with bursts on
    double nominal_bw_bps = 8e6;
    int probe_count = 10;
    int probe_bytes = 1400;
    int traffic_bytes = 1024;
    std::uint64_t seed = 1;
    double duration_s = 1800.0;

    // model parameters beyond the core key set
    double traffic_load = 0.9;       // bandwidth fraction consumed during bursts
    double deadline_frames = 1.05;   // task deadline, in frame periods after spawn
    LatencyModel latency_model = LatencyModel::Measured;
    double image_bits = 2e6;         // largest task input, sizes the transfer unit
    int link_exp_buckets = 16;
    double horizon_frames = 10.0;    // availability horizon, in frame periods
    bool parallel_query = true;
    PaddingConfig padding;

    void validate() const;  // throws std::invalid_argument
};

/// Flat key = value text, '#' comments. Unknown keys are errors.
SimConfig parse_sim_config(std::istream& in);
SimConfig load_sim_config(const std::string& path);
void write_sim_config(const SimConfig& cfg, std::ostream& out);

/// Link throughput at simulated time t: bursts occupy the leading
/// `duty_cycle` fraction of every bandwidth-update interval, phase-aligned
/// to the interval start, and take `traffic_load` of the nominal rate.
double effective_bandwidth(double t, const SimConfig& cfg);

enum class EventKind {
    FrameSpawn,
    HpComplete,
    LpRequestIssue,
    TransferStart,
    TransferEnd,
    TaskStart,
    TaskComplete,
    DeadlineCheck,
    BandwidthProbe,
    TrafficBurstOn,
    TrafficBurstOff,
    ControllerDispatch,  // internal: FIFO job queue pickup
};

/// Run the trace-driven simulation and append one JSON record per line to
/// `log`. The run is deterministic for a given config (including seed) when
/// the reference latency model is selected.
void run_simulation(const SimConfig& cfg, std::ostream& log);
void run_simulation(const SimConfig& cfg, const Trace& trace, std::ostream& log);

} // namespace edgesched

#endif
