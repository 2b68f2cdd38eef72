#include "edgesched/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgesched/exact_usage.hpp"

namespace edgesched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate_request(const LpRequest& req) {
    if (req.tasks.empty() || req.tasks.size() > 4)
        throw std::invalid_argument("a low-priority request carries 1..4 tasks");
}

} // namespace

// ---------------------------------------------------------------------------
// RasScheduler

RasScheduler::RasScheduler(std::vector<Device> devices, double start_time,
                           double initial_bandwidth_bps, TimeWindow horizon,
                           SchedulerConfig cfg)
    : cfg_(cfg),
      devices_(std::move(devices)),
      link_(start_time,
            compute_transfer_unit(cfg.max_image_bits, initial_bandwidth_bps),
            cfg.link_base_buckets, cfg.link_exp_buckets),
      est_(make_bandwidth_estimate(initial_bandwidth_bps, cfg.ewma_alpha)),
      unit_(compute_transfer_unit(cfg.max_image_bits, initial_bandwidth_bps)),
      rng_(cfg.seed) {
    if (devices_.empty())
        throw std::invalid_argument("need at least one device");
    states_.reserve(devices_.size());
    for (const Device& d : devices_)
        states_.emplace_back(d, horizon, cfg_.padding);
}

std::size_t RasScheduler::device_slot(DeviceId id) const {
    for (std::size_t i = 0; i < devices_.size(); ++i)
        if (devices_[i].id == id)
            return i;
    throw std::invalid_argument("unknown device id");
}

const DeviceAvailability& RasScheduler::device_state(DeviceId id) const {
    return states_[device_slot(id)];
}

std::size_t RasScheduler::active_allocation_count() const {
    std::size_t n = 0;
    for (const auto& s : states_)
        n += s.active_workload().size();
    return n;
}

void RasScheduler::commit(const Allocation& alloc, Priority priority,
                          double deadline) {
    states_[device_slot(alloc.device)].record_allocation(alloc);
    meta_[alloc.task] = Meta{alloc, priority, deadline};
}

void RasScheduler::inject_allocation(const Allocation& alloc, Priority priority,
                                     double deadline) {
    Allocation a = alloc;
    a.seq = next_seq_++;
    if (a.comm) {
        a.comm->transfer_id = next_transfer_++;
        link_.reserve(a.comm->bucket_index,
                      CommTask{a.task, a.comm->transfer_id, a.comm->transfer_start});
    }
    commit(a, priority, deadline);
}

SchedulerDecision RasScheduler::schedule_high_priority(const Task& task,
                                                       double now) {
    const auto t0 = Clock::now();
    SchedulerDecision d;
    d.chosen_config = ConfigKind::HighPriority;
    const TaskConfig cfg = TaskConfig::make(ConfigKind::HighPriority,
                                            cfg_.padding.hp);
    const TimeWindow window{now, now + cfg.effective_duration()};
    if (window.t2 > task.deadline) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }
    auto& state = states_[device_slot(task.source_device)];
    if (state.find_window(ConfigKind::HighPriority, window)) {
        d.outcome = Outcome::Allocated;
        d.latency_s = seconds_since(t0);
        Allocation a{task.id, task.source_device, cfg.cores, window, std::nullopt,
                     next_seq_++};
        commit(a, Priority::High, task.deadline);
        d.allocations.push_back(a);
    } else {
        d.outcome = Outcome::PreemptionIssued;
        d.preemption =
            PreemptionRequest{task.source_device, window, task.id, task.deadline};
        d.latency_s = seconds_since(t0);
    }
    return d;
}

namespace {

// Windows in a track are disjoint and sorted, so only the band overlapping
// [now, deadline] can qualify; start there and stop once past the deadline.
template <typename Fn>
void for_each_window_in_band(const std::vector<TimeWindow>& track, double now,
                             double deadline, Fn&& fn) {
    auto it = std::lower_bound(
        track.begin(), track.end(), now,
        [](const TimeWindow& w, double v) { return w.t2 <= v; });
    for (; it != track.end() && it->t1 < deadline; ++it)
        if (!fn(*it))
            return;
}

} // namespace

std::size_t RasScheduler::count_local_fits(DeviceId dev, ConfigKind kind,
                                           double now, double deadline,
                                           std::size_t limit) const {
    const TaskConfig cfg = TaskConfig::make(kind, cfg_.padding.for_kind(kind));
    const double eff = cfg.effective_duration();
    std::size_t n = 0;
    const auto& tracks = states_[device_slot(dev)].list(kind).tracks();
    for (const auto& track : tracks) {
        for_each_window_in_band(track, now, deadline, [&](const TimeWindow& w) {
            if (std::max(w.t1, now) + eff <= std::min(w.t2, deadline))
                ++n;
            return n < limit;
        });
        if (n >= limit)
            break;
    }
    return n;
}

std::optional<ConfigKind> RasScheduler::choose_config(const LpRequest& req,
                                                      double now) const {
    const std::size_t k = req.tasks.size();
    for (ConfigKind kind :
         {ConfigKind::LowPriority2Core, ConfigKind::LowPriority4Core}) {
        const TaskConfig cfg = TaskConfig::make(kind, cfg_.padding.for_kind(kind));
        // transfer time only matters when part of the request must leave the
        // source device
        const bool fits_locally =
            count_local_fits(req.source, kind, now, req.deadline, k) >= k;
        const double comm = fits_locally ? 0.0 : unit_;
        if (now + comm + cfg.effective_duration() <= req.deadline)
            return kind;
    }
    return std::nullopt;
}

SchedulerDecision RasScheduler::schedule_low_priority(const LpRequest& req,
                                                      double now) {
    const auto t0 = Clock::now();
    validate_request(req);
    SchedulerDecision d;
    const std::size_t k = req.tasks.size();

    const auto kind = choose_config(req, now);
    if (!kind) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }
    d.chosen_config = *kind;
    const TaskConfig cfg = TaskConfig::make(*kind, cfg_.padding.for_kind(*kind));
    const double eff = cfg.effective_duration();

    // provisional comm slot per task; unused ones are never reserved
    std::vector<CommSlot> provisional;
    {
        NetworkLink scratch = link_;
        for (std::size_t i = 0; i < k; ++i) {
            auto slot = scratch.find_comm_slot(now);
            if (!slot)
                break;
            scratch.reserve(slot->bucket, CommTask{0, 0, slot->transfer_start});
            provisional.push_back(*slot);
        }
    }
    const double first_remote_arrival =
        provisional.empty() ? std::numeric_limits<double>::infinity()
                            : provisional.front().transfer_start + unit_;

    // fork-join qualification phase, read-only per device
    const std::size_t src = device_slot(req.source);
    std::vector<std::vector<AvailabilityWindow>> cand(devices_.size());
    const int ndev = static_cast<int>(devices_.size());
    // a request needs at most k windows from any one device; a small margin
    // covers windows later discarded by per-task transfer validation
    const std::size_t per_device_cap = k + 8;
#pragma omp parallel for schedule(static) if (cfg_.parallel_query)
    for (int di = 0; di < ndev; ++di) {
        const bool local = static_cast<std::size_t>(di) == src;
        const double arrival = local ? now : first_remote_arrival;
        if (!std::isfinite(arrival))
            continue;
        const auto& tracks = states_[static_cast<std::size_t>(di)].list(*kind).tracks();
        auto& out = cand[static_cast<std::size_t>(di)];
        for (int t = 0; t < static_cast<int>(tracks.size()); ++t) {
            for_each_window_in_band(
                tracks[static_cast<std::size_t>(t)], arrival, req.deadline,
                [&](const TimeWindow& w) {
                    if (std::max(w.t1, arrival) + eff <=
                        std::min(w.t2, req.deadline))
                        out.push_back(AvailabilityWindow{w, t});
                    return out.size() < per_device_cap;
                });
            if (out.size() >= per_device_cap)
                break;
        }
    }

    std::size_t total = 0;
    for (const auto& c : cand)
        total += c.size();
    if (total < k) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }

    // assignment: source device first, then shuffled remotes one window at a
    // time until every task has a valid window
    struct Placement {
        TaskId task;
        std::size_t dev;
        TimeWindow slot;
        std::optional<CommSlot> comm;
    };
    std::vector<Placement> placements;
    std::size_t task_idx = 0;
    for (const AvailabilityWindow& w : cand[src]) {
        if (task_idx >= k)
            break;
        const double start = std::max(w.window.t1, now);
        placements.push_back(Placement{req.tasks[task_idx].id, src,
                                       TimeWindow{start, start + eff},
                                       std::nullopt});
        ++task_idx;
    }

    std::vector<std::size_t> rotation;
    for (std::size_t di = 0; di < devices_.size(); ++di)
        if (di != src && !cand[di].empty())
            rotation.push_back(di);
    rng_.shuffle(rotation);

    std::vector<std::size_t> next_window(devices_.size(), 0);
    std::size_t remote_ordinal = 0;
    while (task_idx < k) {
        bool placed_any = false;
        for (std::size_t r = 0; r < rotation.size() && task_idx < k; ++r) {
            const std::size_t di = rotation[r];
            while (next_window[di] < cand[di].size() &&
                   remote_ordinal < provisional.size()) {
                const AvailabilityWindow& w = cand[di][next_window[di]];
                ++next_window[di];
                const double arrive =
                    provisional[remote_ordinal].transfer_start + unit_;
                const double start = std::max(w.window.t1, arrive);
                if (start + eff <= std::min(w.window.t2, req.deadline)) {
                    placements.push_back(
                        Placement{req.tasks[task_idx].id, di,
                                  TimeWindow{start, start + eff},
                                  provisional[remote_ordinal]});
                    ++remote_ordinal;
                    ++task_idx;
                    placed_any = true;
                    break;
                }
            }
        }
        if (!placed_any)
            break;
    }

    if (task_idx < k) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }

    // the decision is made; the write-through below is a background step and
    // adds no latency to the admitted tasks
    d.outcome = Outcome::Allocated;
    d.latency_s = seconds_since(t0);
    for (const Placement& p : placements) {
        Allocation a{p.task, devices_[p.dev].id, cfg.cores, p.slot, std::nullopt,
                     next_seq_++};
        if (p.comm) {
            const std::uint64_t tid = next_transfer_++;
            a.comm = CommReservation{p.comm->bucket, p.comm->transfer_start, tid};
            link_.reserve(p.comm->bucket,
                          CommTask{p.task, tid, p.comm->transfer_start});
        }
        commit(a, Priority::Low, req.deadline);
        d.allocations.push_back(a);
    }
    return d;
}

PreemptResult RasScheduler::preempt(const PreemptionRequest& req) {
    const auto t0 = Clock::now();
    PreemptResult r;
    auto& state = states_[device_slot(req.device)];

    // victim: overlapping low-priority allocation with the farthest deadline
    const Allocation* victim = nullptr;
    double victim_deadline = -std::numeric_limits<double>::infinity();
    for (const Allocation& a : state.active_workload()) {
        const auto it = meta_.find(a.task);
        if (it == meta_.end() || it->second.priority != Priority::Low)
            continue;
        if (!windows_overlap(a.processing_window, req.window))
            continue;
        if (victim == nullptr || it->second.deadline > victim_deadline ||
            (it->second.deadline == victim_deadline && a.task < victim->task)) {
            victim = &a;
            victim_deadline = it->second.deadline;
        }
    }
    if (victim == nullptr) {
        r.decision.outcome = Outcome::Rejected;
        r.decision.latency_s = seconds_since(t0);
        return r;
    }

    const TaskId victim_id = victim->task;
    if (victim->comm)
        link_.release(victim_id, victim->comm->transfer_id);
    state.release(victim_id);
    meta_.erase(victim_id);
    state.rebuild();
    r.victim = victim_id;

    const TaskConfig cfg = TaskConfig::make(ConfigKind::HighPriority,
                                            cfg_.padding.hp);
    if (state.find_window(ConfigKind::HighPriority, req.window)) {
        Allocation a{req.hp_task, req.device, cfg.cores, req.window, std::nullopt,
                     next_seq_++};
        commit(a, Priority::High, req.hp_deadline);
        r.decision.outcome = Outcome::Allocated;
        r.decision.allocations.push_back(a);
    } else {
        // the victim only partially overlapped; the window is still blocked
        r.decision.outcome = Outcome::Rejected;
    }
    r.decision.chosen_config = ConfigKind::HighPriority;
    r.decision.latency_s = seconds_since(t0);
    return r;
}

BandwidthUpdateOutcome RasScheduler::apply_bandwidth_samples(
    const std::vector<double>& samples_bps, double now) {
    const auto t0 = Clock::now();
    BandwidthUpdateOutcome out;
    const auto upd = update_bandwidth(est_, samples_bps, now);
    est_ = upd.estimate;
    out.estimate_bps = est_.value_bps;
    if (!upd.applied) {
        out.transfer_unit = unit_;
        out.latency_s = seconds_since(t0);
        return out;
    }
    unit_ = compute_transfer_unit(cfg_.max_image_bits, est_.value_bps);
    out.transfer_unit = unit_;

    NetworkLink fresh(now, unit_, cfg_.link_base_buckets, cfg_.link_exp_buckets);
    CascadeResult cr = cascade(link_, fresh);
    link_ = std::move(fresh);
    for (const TransferMove& mv : cr.kept) {
        auto it = meta_.find(mv.task.task);
        if (it != meta_.end() && it->second.alloc.comm) {
            it->second.alloc.comm->bucket_index = mv.bucket;
            it->second.alloc.comm->transfer_start = mv.new_start;
        }
    }
    out.moves = std::move(cr.kept);
    out.overflow = std::move(cr.overflow);
    out.latency_s = seconds_since(t0);
    return out;
}

void RasScheduler::release(TaskId task) {
    auto it = meta_.find(task);
    if (it == meta_.end())
        return;
    const Meta& m = it->second;
    states_[device_slot(m.alloc.device)].release(task);
    if (m.alloc.comm)
        link_.release(task, m.alloc.comm->transfer_id);
    meta_.erase(it);
}

void RasScheduler::extend_horizon(double through) {
    for (auto& s : states_)
        s.extend_horizon(through);
}

// ---------------------------------------------------------------------------
// WpsScheduler

WpsScheduler::WpsScheduler(std::vector<Device> devices, double start_time,
                           double initial_bandwidth_bps, SchedulerConfig cfg)
    : cfg_(cfg),
      devices_(std::move(devices)),
      est_(make_bandwidth_estimate(initial_bandwidth_bps, cfg.ewma_alpha)),
      unit_(compute_transfer_unit(cfg.max_image_bits, initial_bandwidth_bps)),
      rng_(cfg.seed) {
    (void)start_time;
    if (devices_.empty())
        throw std::invalid_argument("need at least one device");
    workload_.resize(devices_.size());
}

std::size_t WpsScheduler::device_slot(DeviceId id) const {
    for (std::size_t i = 0; i < devices_.size(); ++i)
        if (devices_[i].id == id)
            return i;
    throw std::invalid_argument("unknown device id");
}

std::span<const Allocation> WpsScheduler::device_workload(DeviceId id) const {
    return workload_[device_slot(id)];
}

std::size_t WpsScheduler::active_allocation_count() const {
    std::size_t n = 0;
    for (const auto& w : workload_)
        n += w.size();
    return n;
}

void WpsScheduler::inject_allocation(const Allocation& alloc, Priority priority,
                                     double deadline) {
    Allocation a = alloc;
    a.seq = next_seq_++;
    if (a.comm) {
        a.comm->transfer_id = next_transfer_++;
        link_busy_.emplace_back(a.comm->transfer_start,
                                a.comm->transfer_start + unit_);
        link_busy_owner_.push_back(a.task);
    }
    workload_[device_slot(a.device)].push_back(a);
    meta_[a.task] = Meta{a, priority, deadline};
}

SchedulerDecision WpsScheduler::schedule_high_priority(const Task& task,
                                                       double now) {
    const auto t0 = Clock::now();
    SchedulerDecision d;
    d.chosen_config = ConfigKind::HighPriority;
    const TaskConfig cfg = TaskConfig::make(ConfigKind::HighPriority,
                                            cfg_.padding.hp);
    const TimeWindow window{now, now + cfg.effective_duration()};
    if (window.t2 > task.deadline) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }
    const std::size_t src = device_slot(task.source_device);
    const int peak = peak_core_usage(workload_[src], window);
    if (peak + cfg.cores <= devices_[src].total_cores) {
        Allocation a{task.id, task.source_device, cfg.cores, window, std::nullopt,
                     next_seq_++};
        workload_[src].push_back(a);
        meta_[a.task] = Meta{a, Priority::High, task.deadline};
        d.outcome = Outcome::Allocated;
        d.allocations.push_back(a);
    } else {
        d.outcome = Outcome::PreemptionIssued;
        d.preemption =
            PreemptionRequest{task.source_device, window, task.id, task.deadline};
    }
    d.latency_s = seconds_since(t0);
    return d;
}

std::size_t WpsScheduler::count_local_fits(DeviceId dev, ConfigKind kind,
                                           double now, double deadline,
                                           std::size_t limit) const {
    const TaskConfig cfg = TaskConfig::make(kind, cfg_.padding.for_kind(kind));
    const double eff = cfg.effective_duration();
    const std::size_t slot = device_slot(dev);
    std::vector<Allocation> scratch(workload_[slot].begin(), workload_[slot].end());
    std::size_t n = 0;
    while (n < limit) {
        auto s = earliest_core_fit(scratch, devices_[slot].total_cores, cfg.cores,
                                   eff, now, deadline);
        if (!s)
            break;
        scratch.push_back(Allocation{0, dev, cfg.cores, TimeWindow{*s, *s + eff},
                                     std::nullopt, 0});
        ++n;
    }
    return n;
}

std::optional<ConfigKind> WpsScheduler::choose_config(const LpRequest& req,
                                                      double now) const {
    const std::size_t k = req.tasks.size();
    for (ConfigKind kind :
         {ConfigKind::LowPriority2Core, ConfigKind::LowPriority4Core}) {
        const TaskConfig cfg = TaskConfig::make(kind, cfg_.padding.for_kind(kind));
        const bool fits_locally =
            count_local_fits(req.source, kind, now, req.deadline, k) >= k;
        const double comm = fits_locally ? 0.0 : unit_;
        if (now + comm + cfg.effective_duration() <= req.deadline)
            return kind;
    }
    return std::nullopt;
}

SchedulerDecision WpsScheduler::schedule_low_priority(const LpRequest& req,
                                                      double now) {
    const auto t0 = Clock::now();
    validate_request(req);
    SchedulerDecision d;
    const std::size_t k = req.tasks.size();

    const auto kind = choose_config(req, now);
    if (!kind) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }
    d.chosen_config = *kind;
    const TaskConfig cfg = TaskConfig::make(*kind, cfg_.padding.for_kind(*kind));
    const double eff = cfg.effective_duration();

    const double first_gap =
        earliest_link_gap(link_busy_, now, unit_);
    const double first_remote_arrival = first_gap + unit_;

    // per-device capacity count, computed exactly from the raw workloads
    const std::size_t src = device_slot(req.source);
    std::vector<std::size_t> capacity(devices_.size(), 0);
    const int ndev = static_cast<int>(devices_.size());
#pragma omp parallel for schedule(static) if (cfg_.parallel_query)
    for (int di = 0; di < ndev; ++di) {
        const bool local = static_cast<std::size_t>(di) == src;
        const double arrival = local ? now : first_remote_arrival;
        capacity[static_cast<std::size_t>(di)] = count_local_fits(
            devices_[static_cast<std::size_t>(di)].id, *kind, arrival,
            req.deadline, k);
    }

    std::size_t total = 0;
    for (std::size_t c : capacity)
        total += c;
    if (total < k) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }

    // assignment mirrors the availability scheduler: source first, then
    // shuffled remotes round-robin, exact accounting at every step
    struct Placement {
        TaskId task;
        std::size_t dev;
        TimeWindow slot;
        std::optional<double> transfer_start;
    };
    std::vector<Placement> placements;
    std::vector<std::vector<Allocation>> tentative(devices_.size());
    std::vector<TimeWindow> tentative_busy(link_busy_.begin(), link_busy_.end());

    auto try_place = [&](std::size_t di, TaskId task, double arrival,
                         std::optional<double> transfer_start) {
        std::vector<Allocation> merged(workload_[di].begin(), workload_[di].end());
        merged.insert(merged.end(), tentative[di].begin(), tentative[di].end());
        auto s = earliest_core_fit(merged, devices_[di].total_cores, cfg.cores,
                                   eff, arrival, req.deadline);
        if (!s)
            return false;
        tentative[di].push_back(Allocation{task, devices_[di].id, cfg.cores,
                                           TimeWindow{*s, *s + eff}, std::nullopt,
                                           0});
        placements.push_back(
            Placement{task, di, TimeWindow{*s, *s + eff}, transfer_start});
        return true;
    };

    std::size_t task_idx = 0;
    while (task_idx < k &&
           try_place(src, req.tasks[task_idx].id, now, std::nullopt))
        ++task_idx;

    std::vector<std::size_t> rotation;
    for (std::size_t di = 0; di < devices_.size(); ++di)
        if (di != src && capacity[di] > 0)
            rotation.push_back(di);
    rng_.shuffle(rotation);

    std::vector<bool> exhausted(devices_.size(), false);
    while (task_idx < k) {
        bool placed_any = false;
        for (std::size_t r = 0; r < rotation.size() && task_idx < k; ++r) {
            const std::size_t di = rotation[r];
            if (exhausted[di])
                continue;
            const double gap = earliest_link_gap(tentative_busy, now, unit_);
            const double arrival = gap + unit_;
            if (try_place(di, req.tasks[task_idx].id, arrival, gap)) {
                tentative_busy.emplace_back(gap, gap + unit_);
                ++task_idx;
                placed_any = true;
            } else {
                exhausted[di] = true;
            }
        }
        if (!placed_any)
            break;
    }

    if (task_idx < k) {
        d.outcome = Outcome::Rejected;
        d.latency_s = seconds_since(t0);
        return d;
    }

    d.outcome = Outcome::Allocated;
    d.latency_s = seconds_since(t0);
    for (const Placement& p : placements) {
        Allocation a{p.task, devices_[p.dev].id, cfg.cores, p.slot, std::nullopt,
                     next_seq_++};
        if (p.transfer_start) {
            a.comm = CommReservation{-1, *p.transfer_start, next_transfer_++};
            link_busy_.emplace_back(*p.transfer_start, *p.transfer_start + unit_);
            link_busy_owner_.push_back(p.task);
        }
        workload_[p.dev].push_back(a);
        meta_[a.task] = Meta{a, Priority::Low, req.deadline};
        d.allocations.push_back(a);
    }
    return d;
}

PreemptResult WpsScheduler::preempt(const PreemptionRequest& req) {
    const auto t0 = Clock::now();
    PreemptResult r;
    const std::size_t slot = device_slot(req.device);

    const Allocation* victim = nullptr;
    double victim_deadline = -std::numeric_limits<double>::infinity();
    for (const Allocation& a : workload_[slot]) {
        const auto it = meta_.find(a.task);
        if (it == meta_.end() || it->second.priority != Priority::Low)
            continue;
        if (!windows_overlap(a.processing_window, req.window))
            continue;
        if (victim == nullptr || it->second.deadline > victim_deadline ||
            (it->second.deadline == victim_deadline && a.task < victim->task)) {
            victim = &a;
            victim_deadline = it->second.deadline;
        }
    }
    if (victim == nullptr) {
        r.decision.outcome = Outcome::Rejected;
        r.decision.latency_s = seconds_since(t0);
        return r;
    }

    const TaskId victim_id = victim->task;
    release(victim_id);
    r.victim = victim_id;

    const TaskConfig cfg = TaskConfig::make(ConfigKind::HighPriority,
                                            cfg_.padding.hp);
    const int peak = peak_core_usage(workload_[slot], req.window);
    if (peak + cfg.cores <= devices_[slot].total_cores) {
        Allocation a{req.hp_task, req.device, cfg.cores, req.window, std::nullopt,
                     next_seq_++};
        workload_[slot].push_back(a);
        meta_[a.task] = Meta{a, Priority::High, req.hp_deadline};
        r.decision.outcome = Outcome::Allocated;
        r.decision.allocations.push_back(a);
    } else {
        r.decision.outcome = Outcome::Rejected;
    }
    r.decision.chosen_config = ConfigKind::HighPriority;
    r.decision.latency_s = seconds_since(t0);
    return r;
}

BandwidthUpdateOutcome WpsScheduler::apply_bandwidth_samples(
    const std::vector<double>& samples_bps, double now) {
    const auto t0 = Clock::now();
    BandwidthUpdateOutcome out;
    const auto upd = update_bandwidth(est_, samples_bps, now);
    est_ = upd.estimate;
    if (upd.applied)
        unit_ = compute_transfer_unit(cfg_.max_image_bits, est_.value_bps);
    out.estimate_bps = est_.value_bps;
    out.transfer_unit = unit_;
    out.latency_s = seconds_since(t0);
    return out;
}

void WpsScheduler::cancel_link_interval(TaskId task) {
    for (std::size_t i = 0; i < link_busy_owner_.size(); ++i) {
        if (link_busy_owner_[i] == task) {
            link_busy_.erase(link_busy_.begin() + static_cast<std::ptrdiff_t>(i));
            link_busy_owner_.erase(link_busy_owner_.begin() +
                                   static_cast<std::ptrdiff_t>(i));
            return;
        }
    }
}

void WpsScheduler::release(TaskId task) {
    auto it = meta_.find(task);
    if (it == meta_.end())
        return;
    const std::size_t slot = device_slot(it->second.alloc.device);
    auto& wl = workload_[slot];
    wl.erase(std::remove_if(wl.begin(), wl.end(),
                            [&](const Allocation& a) { return a.task == task; }),
             wl.end());
    cancel_link_interval(task);
    meta_.erase(it);
}

} // namespace edgesched
