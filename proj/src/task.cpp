#include "edgesched/task.hpp"

#include <stdexcept>

namespace edgesched {

TaskConfig TaskConfig::make(ConfigKind kind, double padding) {
    if (padding < 0.0)
        throw std::invalid_argument("task padding must be non-negative");
    switch (kind) {
        case ConfigKind::HighPriority:
            return TaskConfig{kind, 1, kHighPriorityDuration, padding};
        case ConfigKind::LowPriority2Core:
            return TaskConfig{kind, 2, kLowPriority2CoreDuration, padding};
        case ConfigKind::LowPriority4Core:
            return TaskConfig{kind, 4, kLowPriority4CoreDuration, padding};
    }
    throw std::invalid_argument("unknown config kind");
}

bool transition_allowed(TaskState from, TaskState to) {
    switch (from) {
        case TaskState::Pending:
            return to == TaskState::Allocated || to == TaskState::Rejected ||
                   to == TaskState::ViolatedDeadline;
        case TaskState::Allocated:
            return to == TaskState::Running || to == TaskState::Preempted ||
                   to == TaskState::ViolatedDeadline;
        case TaskState::Running:
            return to == TaskState::Completed || to == TaskState::Preempted ||
                   to == TaskState::ViolatedDeadline;
        case TaskState::Preempted:
            return to == TaskState::Allocated || to == TaskState::Rejected ||
                   to == TaskState::ViolatedDeadline;
        case TaskState::Completed:
        case TaskState::ViolatedDeadline:
        case TaskState::Rejected:
            return false;
    }
    return false;
}

void Task::set_state(TaskState next) {
    if (!transition_allowed(state, next))
        throw std::logic_error(std::string("illegal task state transition ") +
                               to_string(state) + " -> " + to_string(next));
    state = next;
}

double frame_period(std::optional<double> override_s) {
    if (!override_s)
        return kDefaultFramePeriod;
    if (*override_s <= 0.0)
        throw std::invalid_argument("frame period must be positive");
    return *override_s;
}

} // namespace edgesched
