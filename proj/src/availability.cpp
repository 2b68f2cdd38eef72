#include "edgesched/availability.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace edgesched {

std::vector<TimeWindow> bisect(const TimeWindow& window, const TimeWindow& slot,
                               double min_duration) {
    if (!window_contains(window, slot))
        throw std::logic_error("bisect: slot not contained in window");
    std::vector<TimeWindow> out;
    if (slot.t1 - window.t1 >= min_duration)
        out.emplace_back(window.t1, slot.t1);
    if (window.t2 - slot.t2 >= min_duration)
        out.emplace_back(slot.t2, window.t2);
    return out;
}

AvailabilityList::AvailabilityList(DeviceId device, ConfigKind kind,
                                   int min_core_capacity, double min_duration,
                                   int device_cores, TimeWindow horizon)
    : device_(device),
      kind_(kind),
      min_cores_(min_core_capacity),
      min_duration_(min_duration) {
    if (min_core_capacity <= 0 || device_cores <= 0)
        throw std::invalid_argument("core counts must be positive");
    if (device_cores % min_core_capacity != 0)
        throw std::invalid_argument(
            "device cores must be divisible by the config core requirement");
    if (min_duration <= 0.0)
        throw std::invalid_argument("minimum duration must be positive");
    track_count_ = device_cores / min_core_capacity;
    reset(horizon);
}

void AvailabilityList::reset(TimeWindow horizon) {
    if (horizon.duration() < min_duration_)
        throw std::invalid_argument("horizon shorter than the minimum duration");
    bounds_ = {horizon.t1, horizon.t2};
    level_ = {track_count_};
    materialize();
}

void AvailabilityList::subtract(const TimeWindow& slot, int lanes) {
    if (lanes <= 0)
        return;
    const double a = std::max(slot.t1, bounds_.front());
    const double b = std::min(slot.t2, bounds_.back());
    if (!(a < b))
        return;
    // split the step function at a and b, then lower the levels in between
    auto split_at = [this](double x) {
        auto it = std::lower_bound(bounds_.begin(), bounds_.end(), x);
        if (it != bounds_.end() && *it == x)
            return;
        std::size_t idx = static_cast<std::size_t>(it - bounds_.begin());
        bounds_.insert(it, x);
        level_.insert(level_.begin() + static_cast<std::ptrdiff_t>(idx) - 1,
                      level_[idx - 1]);
    };
    split_at(a);
    split_at(b);
    for (std::size_t i = 0; i + 1 < bounds_.size(); ++i) {
        if (bounds_[i] >= a && bounds_[i + 1] <= b)
            level_[i] = std::max(0, level_[i] - lanes);
    }
    normalize();
    materialize();
}

void AvailabilityList::extend_horizon(double new_end) {
    if (new_end <= bounds_.back())
        return;
    bounds_.push_back(new_end);
    level_.push_back(track_count_);
    normalize();
    materialize();
}

void AvailabilityList::normalize() {
    std::size_t w = 0;
    for (std::size_t i = 0; i < level_.size(); ++i) {
        if (w > 0 && level_[w - 1] == level_[i]) {
            bounds_[w] = bounds_[i + 1];  // merge into previous segment
        } else {
            level_[w] = level_[i];
            bounds_[w + 1] = bounds_[i + 1];
            ++w;
        }
    }
    level_.resize(w);
    bounds_.resize(w + 1);
}

void AvailabilityList::materialize() {
    tracks_.assign(static_cast<std::size_t>(track_count_), {});
    for (int t = 0; t < track_count_; ++t) {
        const int need = track_count_ - t;  // track 0 is the tightest lane
        auto& track = tracks_[static_cast<std::size_t>(t)];
        std::size_t i = 0;
        while (i < level_.size()) {
            if (level_[i] < need) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < level_.size() && level_[j] >= need)
                ++j;
            const double t1 = bounds_[i];
            const double t2 = bounds_[j];
            if (t2 - t1 >= min_duration_)
                track.emplace_back(t1, t2);
            i = j;
        }
    }
}

std::optional<AvailabilityWindow> AvailabilityList::find_window(
    const TimeWindow& desired) const {
    for (int t = 0; t < track_count_; ++t) {
        const auto& track = tracks_[static_cast<std::size_t>(t)];
        // within a track windows are disjoint and sorted, so only the last
        // window starting at or before desired.t1 can contain it
        auto it = std::upper_bound(
            track.begin(), track.end(), desired.t1,
            [](double v, const TimeWindow& w) { return v < w.t1; });
        if (it == track.begin())
            continue;
        --it;
        if (window_contains(*it, desired))
            return AvailabilityWindow{*it, t};
    }
    return std::nullopt;
}

std::string AvailabilityList::dump() const {
    std::ostringstream os;
    os << "device " << device_ << " config " << to_string(kind_) << " min_cores "
       << min_cores_ << " min_dur " << min_duration_ << " tracks " << track_count_
       << "\n";
    for (int t = 0; t < track_count_; ++t) {
        os << "  track " << t << ":";
        for (const TimeWindow& w : tracks_[static_cast<std::size_t>(t)])
            os << " [" << w.t1 << ", " << w.t2 << ")";
        os << "\n";
    }
    return os.str();
}

std::size_t DeviceAvailability::kind_index(ConfigKind kind) {
    switch (kind) {
        case ConfigKind::HighPriority: return 0;
        case ConfigKind::LowPriority2Core: return 1;
        case ConfigKind::LowPriority4Core: return 2;
    }
    throw std::invalid_argument("unknown config kind");
}

DeviceAvailability::DeviceAvailability(Device device, TimeWindow horizon,
                                       const PaddingConfig& padding)
    : device_(device) {
    lists_.reserve(kAllConfigKinds.size());
    for (ConfigKind kind : kAllConfigKinds) {
        const TaskConfig cfg = TaskConfig::make(kind, padding.for_kind(kind));
        lists_.emplace_back(device.id, kind, cfg.cores, cfg.effective_duration(),
                            device.total_cores, horizon);
    }
}

const AvailabilityList& DeviceAvailability::list(ConfigKind kind) const {
    return lists_[kind_index(kind)];
}

std::optional<AvailabilityWindow> DeviceAvailability::find_window(
    ConfigKind kind, const TimeWindow& desired) const {
    return lists_[kind_index(kind)].find_window(desired);
}

void DeviceAvailability::write_through(const Allocation& alloc) {
    for (auto& list : lists_) {
        const int lanes =
            (alloc.cores + list.min_core_capacity() - 1) / list.min_core_capacity();
        list.subtract(alloc.processing_window, lanes);
    }
}

void DeviceAvailability::record_allocation(const Allocation& alloc) {
    if (alloc.device != device_.id)
        throw std::invalid_argument("allocation belongs to another device");
    write_through(alloc);
    workload_.push_back(alloc);
}

bool DeviceAvailability::release(TaskId task) {
    auto it = std::find_if(workload_.begin(), workload_.end(),
                           [&](const Allocation& a) { return a.task == task; });
    if (it == workload_.end())
        return false;
    workload_.erase(it);
    return true;
}

void DeviceAvailability::rebuild() {
    const double h1 = lists_[0].horizon_start();
    const double h2 = lists_[0].horizon_end();
    for (auto& list : lists_)
        list.reset(TimeWindow{h1, h2});
    assert(std::is_sorted(workload_.begin(), workload_.end(),
                          [](const Allocation& a, const Allocation& b) {
                              return a.seq < b.seq;
                          }));
    for (const Allocation& alloc : workload_)
        write_through(alloc);
}

void DeviceAvailability::extend_horizon(double new_end) {
    for (auto& list : lists_)
        list.extend_horizon(new_end);
}

std::string DeviceAvailability::dump() const {
    std::string out;
    for (const auto& list : lists_)
        out += list.dump();
    return out;
}

} // namespace edgesched
