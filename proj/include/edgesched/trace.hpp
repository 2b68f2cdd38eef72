#ifndef EDGESCHED_TRACE_HPP
#define EDGESCHED_TRACE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgesched/task.hpp"

namespace edgesched {

inline constexpr int kTraceDevices = 4;

/// Per-frame workload for the four devices. Value semantics:
///   -1  no object detected, nothing spawns
///    0  a high-priority task only
///   1..4  a high-priority task, then a low-priority request of that many tasks
struct TraceEntry {
    std::uint64_t frame_index = 0;
    std::array<int, kTraceDevices> per_device{};
};

using Trace = std::vector<TraceEntry>;

/// Line-oriented text: four comma-separated integers per frame, '#' comments.
Trace parse_trace(std::istream& in);
Trace load_trace(const std::string& path);
void write_trace(const Trace& trace, std::ostream& out);
void save_trace(const Trace& trace, const std::string& path);

enum class TraceKind { Uniform, Weighted1, Weighted2, Weighted3, Weighted4 };

TraceKind trace_kind_from_string(const std::string& name);
const char* to_string(TraceKind kind);

/// Uniform draws 1..4 with equal probability. Weighted-X draws X with
/// probability `dominant` and splits the remainder evenly over the other
/// five values in {-1,0,1..4}. Deterministic for a given seed.
Trace generate_trace(TraceKind kind, std::size_t frames, std::uint64_t seed,
                     double dominant = 0.7);

/// One sampling event on one device: a high-priority task plus 0..4
/// low-priority tasks. Complete only when every member task completed.
struct Frame {
    std::uint64_t index = 0;
    DeviceId device = 0;
    double spawn_time = 0.0;
    TaskId hp_task = 0;
    std::vector<TaskId> lp_tasks;
};

/// Completion is derived: the HP task and all LP tasks reached Completed.
template <typename StateOf>
bool frame_completed(const Frame& frame, StateOf&& state_of) {
    if (state_of(frame.hp_task) != TaskState::Completed)
        return false;
    for (TaskId t : frame.lp_tasks)
        if (state_of(t) != TaskState::Completed)
            return false;
    return true;
}

} // namespace edgesched

#endif
