#ifndef EDGESCHED_TASK_HPP
#define EDGESCHED_TASK_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "edgesched/time_window.hpp"

namespace edgesched {

using TaskId = std::uint64_t;
using DeviceId = int;

// Benchmarked per-stage processing times (seconds).
inline constexpr double kHighPriorityDuration = 0.98;
inline constexpr double kLowPriority2CoreDuration = 16.862;
inline constexpr double kLowPriority4CoreDuration = 11.611;

// Inter-frame interval of the sampling pipeline (seconds).
inline constexpr double kDefaultFramePeriod = 18.86;

enum class ConfigKind { HighPriority, LowPriority2Core, LowPriority4Core };

inline const char* to_string(ConfigKind k) {
    switch (k) {
        case ConfigKind::HighPriority: return "hp";
        case ConfigKind::LowPriority2Core: return "lp2";
        case ConfigKind::LowPriority4Core: return "lp4";
    }
    return "?";
}

/// One of the three fixed execution profiles. `padding` absorbs runtime
/// variance on top of the benchmarked duration; it is an experiment
/// parameter, zero by default.
struct TaskConfig {
    ConfigKind kind;
    int cores;
    double duration_s;
    double padding_s = 0.0;

    double effective_duration() const { return duration_s + padding_s; }

    static TaskConfig high_priority(double padding = 0.0) {
        return make(ConfigKind::HighPriority, padding);
    }
    static TaskConfig low_priority_2core(double padding = 0.0) {
        return make(ConfigKind::LowPriority2Core, padding);
    }
    static TaskConfig low_priority_4core(double padding = 0.0) {
        return make(ConfigKind::LowPriority4Core, padding);
    }
    static TaskConfig make(ConfigKind kind, double padding = 0.0);
};

enum class Priority { High, Low };

enum class TaskState {
    Pending,
    Allocated,
    Running,
    Completed,
    Preempted,
    ViolatedDeadline,
    Rejected,
};

inline const char* to_string(TaskState s) {
    switch (s) {
        case TaskState::Pending: return "pending";
        case TaskState::Allocated: return "allocated";
        case TaskState::Running: return "running";
        case TaskState::Completed: return "completed";
        case TaskState::Preempted: return "preempted";
        case TaskState::ViolatedDeadline: return "violated";
        case TaskState::Rejected: return "rejected";
    }
    return "?";
}

/// Legal task state transitions. Anything not listed here is a bug in the
/// caller and set_state() throws.
bool transition_allowed(TaskState from, TaskState to);

inline bool is_terminal(TaskState s) {
    return s == TaskState::Completed || s == TaskState::ViolatedDeadline ||
           s == TaskState::Rejected;
}

struct Task {
    TaskId id = 0;
    DeviceId source_device = 0;
    TaskConfig config = TaskConfig::high_priority();
    double deadline = 0.0;  // absolute, seconds
    Priority priority = Priority::High;
    TaskState state = TaskState::Pending;
    double input_bits = 0.0;  // task input is modeled by size only

    void set_state(TaskState next);
};

/// Configured inter-frame interval; pass a value to override the default.
/// Non-positive overrides are rejected.
double frame_period(std::optional<double> override_s = std::nullopt);

} // namespace edgesched

#endif
