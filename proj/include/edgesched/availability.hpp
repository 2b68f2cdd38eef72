#ifndef EDGESCHED_AVAILABILITY_HPP
#define EDGESCHED_AVAILABILITY_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "edgesched/device.hpp"
#include "edgesched/task.hpp"
#include "edgesched/time_window.hpp"

namespace edgesched {

struct AvailabilityWindow {
    TimeWindow window;
    int track;
};

/// Split `window` around an allocated `slot` it contains. Returns the
/// left-hand and right-hand remnants, each only if it is at least
/// `min_duration` long. Throws std::logic_error when the containment
/// precondition does not hold.
std::vector<TimeWindow> bisect(const TimeWindow& window, const TimeWindow& slot,
                               double min_duration);

/// Guaranteed-availability windows of one device for one task configuration.
///
/// The list owns `track_count = device_cores / min_core_capacity` parallel
/// tracks. A window on any track promises that at least `min_core_capacity`
/// cores are free for its whole span, and every stored window is at least
/// `min_duration` long, so the first window that contains a desired slot can
/// be taken without further checks.
///
/// Internally the list keeps an integer lane-coverage step function over the
/// horizon. An allocation of c cores consumes ceil(c / min_core_capacity)
/// lanes across its slot. Tracks are materialized as the coverage level sets
/// in staircase order (track 0 is the most constrained lane), which keeps the
/// per-track windows sorted, disjoint and nested across tracks, and makes the
/// subtraction order-independent: rebuilding from a workload reproduces the
/// incrementally written state exactly.
class AvailabilityList {
public:
    AvailabilityList(DeviceId device, ConfigKind kind, int min_core_capacity,
                     double min_duration, int device_cores, TimeWindow horizon);

    /// First window (track index order, then start-time order) containing
    /// `desired`. Empty result means the device has no guaranteed capacity.
    std::optional<AvailabilityWindow> find_window(const TimeWindow& desired) const;

    /// Remove `lanes` lanes of coverage across `slot` (clamped at zero).
    void subtract(const TimeWindow& slot, int lanes);

    /// Append fresh full coverage over [current end, new_end).
    void extend_horizon(double new_end);

    /// Back to fully available over the given horizon.
    void reset(TimeWindow horizon);

    DeviceId device() const { return device_; }
    ConfigKind config() const { return kind_; }
    int min_core_capacity() const { return min_cores_; }
    double min_duration() const { return min_duration_; }
    int track_count() const { return track_count_; }
    double horizon_start() const { return bounds_.front(); }
    double horizon_end() const { return bounds_.back(); }

    /// Materialized per-track windows, sorted by start time within a track.
    const std::vector<std::vector<TimeWindow>>& tracks() const { return tracks_; }

    std::string dump() const;

private:
    DeviceId device_;
    ConfigKind kind_;
    int min_cores_;
    double min_duration_;
    int track_count_;

    // lane-coverage step function: level_[i] lanes over [bounds_[i], bounds_[i+1])
    std::vector<double> bounds_;
    std::vector<int> level_;

    std::vector<std::vector<TimeWindow>> tracks_;

    void normalize();
    void materialize();
};

struct PaddingConfig {
    double hp = 0.0;
    double lp2 = 0.0;
    double lp4 = 0.0;

    double for_kind(ConfigKind kind) const {
        switch (kind) {
            case ConfigKind::HighPriority: return hp;
            case ConfigKind::LowPriority2Core: return lp2;
            case ConfigKind::LowPriority4Core: return lp4;
        }
        return 0.0;
    }
};

inline constexpr std::array<ConfigKind, 3> kAllConfigKinds = {
    ConfigKind::HighPriority, ConfigKind::LowPriority2Core,
    ConfigKind::LowPriority4Core};

/// Per-device scheduling state: the active workload plus one availability
/// list per task configuration.
class DeviceAvailability {
public:
    DeviceAvailability(Device device, TimeWindow horizon,
                       const PaddingConfig& padding = PaddingConfig{});

    const Device& device() const { return device_; }

    const AvailabilityList& list(ConfigKind kind) const;
    std::optional<AvailabilityWindow> find_window(ConfigKind kind,
                                                  const TimeWindow& desired) const;

    /// Write-through: subtract the allocated slot from every list of the
    /// device and remember the allocation. Runs after the task has already
    /// been granted the slot, so queries never wait on it.
    void record_allocation(const Allocation& alloc);

    /// Forget an allocation (completed or preempted task). Freed capacity is
    /// not reinserted; call rebuild() when it must become visible again.
    bool release(TaskId task);

    /// Reconstruct all lists from the active workload: fresh full lists, then
    /// every allocation written through again in allocation-time order.
    void rebuild();

    void extend_horizon(double new_end);
    double horizon_end() const { return lists_[0].horizon_end(); }

    const std::vector<Allocation>& active_workload() const { return workload_; }

    std::string dump() const;

private:
    Device device_;
    std::vector<AvailabilityList> lists_;  // indexed by kind order in kAllConfigKinds
    std::vector<Allocation> workload_;     // kept in allocation (seq) order

    static std::size_t kind_index(ConfigKind kind);
    void write_through(const Allocation& alloc);
};

} // namespace edgesched

#endif
