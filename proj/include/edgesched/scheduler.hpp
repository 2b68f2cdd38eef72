#ifndef EDGESCHED_SCHEDULER_HPP
#define EDGESCHED_SCHEDULER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "edgesched/availability.hpp"
#include "edgesched/device.hpp"
#include "edgesched/network_link.hpp"
#include "edgesched/rng.hpp"
#include "edgesched/task.hpp"
#include "edgesched/time_window.hpp"

namespace edgesched {

struct LpTaskSpec {
    TaskId id = 0;
    double input_bits = 0.0;
};

/// A DNN scheduling request: 1..4 low-priority tasks sharing one deadline.
struct LpRequest {
    DeviceId source = 0;
    std::vector<LpTaskSpec> tasks;
    double deadline = 0.0;
    double issue_time = 0.0;
    bool reallocation = false;
};

/// Raised when a high-priority task found no free window on its source
/// device; carries the window it attempted to claim.
struct PreemptionRequest {
    DeviceId device = 0;
    TimeWindow window{0.0, 1.0};
    TaskId hp_task = 0;
    double hp_deadline = 0.0;
};

enum class Outcome { Allocated, Rejected, PreemptionIssued };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Allocated: return "allocated";
        case Outcome::Rejected: return "rejected";
        case Outcome::PreemptionIssued: return "preemption_issued";
    }
    return "?";
}

struct SchedulerDecision {
    Outcome outcome = Outcome::Rejected;
    std::vector<Allocation> allocations;
    double latency_s = 0.0;  // wall-clock spent inside the scheduling call
    ConfigKind chosen_config = ConfigKind::LowPriority2Core;
    std::optional<PreemptionRequest> preemption;
};

struct PreemptResult {
    SchedulerDecision decision;
    std::optional<TaskId> victim;
};

struct BandwidthUpdateOutcome {
    double estimate_bps = 0.0;
    double transfer_unit = 0.0;
    std::vector<TransferMove> moves;   // reservations shifted by the rebuild
    std::vector<CommTask> overflow;    // no longer fit; re-schedule their tasks
    double latency_s = 0.0;
};

class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual const char* name() const = 0;

    virtual SchedulerDecision schedule_high_priority(const Task& task,
                                                     double now) = 0;
    virtual SchedulerDecision schedule_low_priority(const LpRequest& req,
                                                    double now) = 0;
    virtual PreemptResult preempt(const PreemptionRequest& req) = 0;

    /// Feed probe samples through the bandwidth estimator and refresh any
    /// derived structures.
    virtual BandwidthUpdateOutcome apply_bandwidth_samples(
        const std::vector<double>& samples_bps, double now) = 0;

    /// Drop a terminal task from the scheduler's bookkeeping.
    virtual void release(TaskId task) = 0;

    virtual void extend_horizon(double through) = 0;

    virtual double current_bandwidth_estimate() const = 0;
    virtual double current_transfer_unit() const = 0;
    virtual std::size_t active_allocation_count() const = 0;
};

struct SchedulerConfig {
    std::uint64_t seed = 1;
    bool parallel_query = true;
    PaddingConfig padding;
    double max_image_bits = 2e6;
    int link_base_buckets = 4;
    int link_exp_buckets = 16;
    double ewma_alpha = 0.3;
};

/// Resource-availability scheduler: containment queries over per-config
/// availability lists plus the discretised link. Queries are cheap; writes
/// (write-through, pre-emption rebuild) carry the cost.
class RasScheduler : public Scheduler {
public:
    RasScheduler(std::vector<Device> devices, double start_time,
                 double initial_bandwidth_bps, TimeWindow horizon,
                 SchedulerConfig cfg = SchedulerConfig{});

    const char* name() const override { return "ras"; }

    SchedulerDecision schedule_high_priority(const Task& task, double now) override;
    SchedulerDecision schedule_low_priority(const LpRequest& req, double now) override;
    PreemptResult preempt(const PreemptionRequest& req) override;
    BandwidthUpdateOutcome apply_bandwidth_samples(
        const std::vector<double>& samples_bps, double now) override;
    void release(TaskId task) override;
    void extend_horizon(double through) override;

    double current_bandwidth_estimate() const override { return est_.value_bps; }
    double current_transfer_unit() const override { return unit_; }
    std::size_t active_allocation_count() const override;

    /// Seed state directly (benchmarks and paired-oracle tests).
    void inject_allocation(const Allocation& alloc, Priority priority,
                           double deadline);

    const DeviceAvailability& device_state(DeviceId id) const;
    const NetworkLink& link() const { return link_; }

private:
    struct Meta {
        Allocation alloc;
        Priority priority = Priority::Low;
        double deadline = 0.0;
    };

    SchedulerConfig cfg_;
    std::vector<Device> devices_;
    std::vector<DeviceAvailability> states_;
    NetworkLink link_;
    BandwidthEstimate est_;
    double unit_;
    Rng rng_;
    std::uint64_t next_seq_ = 1;
    std::uint64_t next_transfer_ = 1;
    std::unordered_map<TaskId, Meta> meta_;

    std::size_t device_slot(DeviceId id) const;
    std::size_t count_local_fits(DeviceId dev, ConfigKind kind, double now,
                                 double deadline, std::size_t limit) const;
    std::optional<ConfigKind> choose_config(const LpRequest& req, double now) const;
    void commit(const Allocation& alloc, Priority priority, double deadline);
};

/// Exhaustive baseline: per-instant core accounting over the raw workload
/// and exact transfer packing on the link. Same admission semantics as the
/// availability scheduler, computed the slow way; doubles as the feasibility
/// oracle in tests.
class WpsScheduler : public Scheduler {
public:
    WpsScheduler(std::vector<Device> devices, double start_time,
                 double initial_bandwidth_bps, SchedulerConfig cfg = SchedulerConfig{});

    const char* name() const override { return "wps"; }

    SchedulerDecision schedule_high_priority(const Task& task, double now) override;
    SchedulerDecision schedule_low_priority(const LpRequest& req, double now) override;
    PreemptResult preempt(const PreemptionRequest& req) override;
    BandwidthUpdateOutcome apply_bandwidth_samples(
        const std::vector<double>& samples_bps, double now) override;
    void release(TaskId task) override;
    void extend_horizon(double) override {}

    double current_bandwidth_estimate() const override { return est_.value_bps; }
    double current_transfer_unit() const override { return unit_; }
    std::size_t active_allocation_count() const override;

    void inject_allocation(const Allocation& alloc, Priority priority,
                           double deadline);

    std::span<const Allocation> device_workload(DeviceId id) const;
    std::span<const TimeWindow> link_busy() const { return link_busy_; }

private:
    struct Meta {
        Allocation alloc;
        Priority priority = Priority::Low;
        double deadline = 0.0;
    };

    SchedulerConfig cfg_;
    std::vector<Device> devices_;
    std::vector<std::vector<Allocation>> workload_;
    std::vector<TimeWindow> link_busy_;
    std::vector<TaskId> link_busy_owner_;
    BandwidthEstimate est_;
    double unit_;
    Rng rng_;
    std::uint64_t next_seq_ = 1;
    std::uint64_t next_transfer_ = 1;
    std::unordered_map<TaskId, Meta> meta_;

    std::size_t device_slot(DeviceId id) const;
    std::size_t count_local_fits(DeviceId dev, ConfigKind kind, double now,
                                 double deadline, std::size_t limit) const;
    std::optional<ConfigKind> choose_config(const LpRequest& req, double now) const;
    void cancel_link_interval(TaskId task);
};

} // namespace edgesched

#endif
