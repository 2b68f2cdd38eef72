#ifndef EDGESCHED_DEVICE_HPP
#define EDGESCHED_DEVICE_HPP

#include <cstdint>
#include <optional>

#include "edgesched/task.hpp"
#include "edgesched/time_window.hpp"

namespace edgesched {

struct Device {
    DeviceId id = 0;
    int total_cores = 4;
};

/// Link-side reservation attached to a remote placement.
struct CommReservation {
    int bucket_index = 0;
    double transfer_start = 0.0;
    std::uint64_t transfer_id = 0;
};

/// A task bound to a device, a core count, and a processing window.
/// `comm` is present exactly when the task runs away from its source device.
struct Allocation {
    TaskId task = 0;
    DeviceId device = 0;
    int cores = 0;
    TimeWindow processing_window{0.0, 1.0};
    std::optional<CommReservation> comm;
    std::uint64_t seq = 0;  // allocation-time order, used by rebuild
};

} // namespace edgesched

#endif
