#include "edgesched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "edgesched/rng.hpp"
#include "edgesched/scheduler.hpp"

namespace edgesched {

using ordered_json = nlohmann::ordered_json;

const char* to_string(SchedulerKind k) {
    return k == SchedulerKind::RAS ? "ras" : "wps";
}

SchedulerKind scheduler_kind_from_string(const std::string& name) {
    if (name == "ras") return SchedulerKind::RAS;
    if (name == "wps") return SchedulerKind::WPS;
    throw std::invalid_argument("unknown scheduler: " + name);
}

LatencyTable ras_reference_latencies() {
    return LatencyTable{0.002, 0.080, 0.005, 0.013, 0.005};
}

LatencyTable wps_reference_latencies() {
    return LatencyTable{0.010, 0.250, 0.175, 0.150, 0.0005};
}

void SimConfig::validate() const {
    frame_period(frame_period_s);  // throws on non-positive
    if (bw_interval_s <= 0.0)
        throw std::invalid_argument("bw_interval_s must be positive");
    if (duty_cycle < 0.0 || duty_cycle >= 1.0)
        throw std::invalid_argument("duty_cycle must lie in [0, 1)");
    if (nominal_bw_bps <= 0.0)
        throw std::invalid_argument("nominal_bw_bps must be positive");
    if (probe_count <= 0 || probe_bytes <= 0 || traffic_bytes <= 0)
        throw std::invalid_argument("probe/traffic parameters must be positive");
    if (duration_s <= 0.0)
        throw std::invalid_argument("duration_s must be positive");
    if (traffic_load <= 0.0 || traffic_load >= 1.0)
        throw std::invalid_argument("traffic_load must lie in (0, 1)");
    if (deadline_frames <= 0.0)
        throw std::invalid_argument("deadline_frames must be positive");
    if (image_bits <= 0.0)
        throw std::invalid_argument("image_bits must be positive");
    if (link_exp_buckets < 1)
        throw std::invalid_argument("link_exp_buckets must be at least 1");
    if (horizon_frames < 1.0)
        throw std::invalid_argument("horizon_frames must be at least 1");
}

double effective_bandwidth(double t, const SimConfig& cfg) {
    if (cfg.duty_cycle <= 0.0)
        return cfg.nominal_bw_bps;
    const double phase = std::fmod(t, cfg.bw_interval_s);
    const bool burst_on = phase < cfg.duty_cycle * cfg.bw_interval_s;
    return burst_on ? cfg.nominal_bw_bps * (1.0 - cfg.traffic_load)
                    : cfg.nominal_bw_bps;
}

// ---------------------------------------------------------------------------
// configuration file I/O

namespace {

const std::map<std::string, int>& config_keys() {
    static const std::map<std::string, int> keys = {
        {"trace", 0},         {"scheduler", 1},    {"frame_period_s", 2},
        {"bw_interval_s", 3}, {"duty_cycle", 4},   {"nominal_bw_bps", 5},
        {"probe_count", 6},   {"probe_bytes", 7},  {"traffic_bytes", 8},
        {"seed", 9},          {"duration_s", 10},  {"traffic_load", 11},
        {"latency_model", 12},{"image_bits", 13},  {"link_exp_buckets", 14},
        {"horizon_frames", 15},{"parallel_query", 16}, {"padding_hp_s", 17},
        {"padding_lp2_s", 18},{"padding_lp4_s", 19},{"deadline_frames", 20}};
    return keys;
}

} // namespace

SimConfig parse_sim_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!config_keys().count(key))
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        try {
            if (key == "trace") cfg.trace = value;
            else if (key == "scheduler") cfg.scheduler = scheduler_kind_from_string(value);
            else if (key == "frame_period_s") cfg.frame_period_s = std::stod(value);
            else if (key == "bw_interval_s") cfg.bw_interval_s = std::stod(value);
            else if (key == "duty_cycle") cfg.duty_cycle = std::stod(value);
            else if (key == "nominal_bw_bps") cfg.nominal_bw_bps = std::stod(value);
            else if (key == "probe_count") cfg.probe_count = std::stoi(value);
            else if (key == "probe_bytes") cfg.probe_bytes = std::stoi(value);
            else if (key == "traffic_bytes") cfg.traffic_bytes = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "duration_s") cfg.duration_s = std::stod(value);
            else if (key == "traffic_load") cfg.traffic_load = std::stod(value);
            else if (key == "deadline_frames") cfg.deadline_frames = std::stod(value);
            else if (key == "latency_model")
                cfg.latency_model = value == "measured" ? LatencyModel::Measured
                                  : value == "reference"
                                      ? LatencyModel::Reference
                                      : throw std::invalid_argument(
                                            "latency_model is measured|reference");
            else if (key == "image_bits") cfg.image_bits = std::stod(value);
            else if (key == "link_exp_buckets") cfg.link_exp_buckets = std::stoi(value);
            else if (key == "horizon_frames") cfg.horizon_frames = std::stod(value);
            else if (key == "parallel_query") cfg.parallel_query = value != "0";
            else if (key == "padding_hp_s") cfg.padding.hp = std::stod(value);
            else if (key == "padding_lp2_s") cfg.padding.lp2 = std::stod(value);
            else if (key == "padding_lp4_s") cfg.padding.lp4 = std::stod(value);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": bad value for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    return parse_sim_config(in);
}

void write_sim_config(const SimConfig& cfg, std::ostream& out) {
    out << "trace = " << cfg.trace << "\n";
    out << "scheduler = " << to_string(cfg.scheduler) << "\n";
    out << "frame_period_s = " << cfg.frame_period_s << "\n";
    out << "bw_interval_s = " << cfg.bw_interval_s << "\n";
    out << "duty_cycle = " << cfg.duty_cycle << "\n";
    out << "nominal_bw_bps = " << cfg.nominal_bw_bps << "\n";
    out << "probe_count = " << cfg.probe_count << "\n";
    out << "probe_bytes = " << cfg.probe_bytes << "\n";
    out << "traffic_bytes = " << cfg.traffic_bytes << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "duration_s = " << cfg.duration_s << "\n";
    out << "traffic_load = " << cfg.traffic_load << "\n";
    out << "deadline_frames = " << cfg.deadline_frames << "\n";
    out << "latency_model = "
        << (cfg.latency_model == LatencyModel::Measured ? "measured" : "reference")
        << "\n";
    out << "image_bits = " << cfg.image_bits << "\n";
    out << "link_exp_buckets = " << cfg.link_exp_buckets << "\n";
    out << "horizon_frames = " << cfg.horizon_frames << "\n";
    out << "parallel_query = " << (cfg.parallel_query ? 1 : 0) << "\n";
    if (cfg.padding.hp > 0) out << "padding_hp_s = " << cfg.padding.hp << "\n";
    if (cfg.padding.lp2 > 0) out << "padding_lp2_s = " << cfg.padding.lp2 << "\n";
    if (cfg.padding.lp4 > 0) out << "padding_lp4_s = " << cfg.padding.lp4 << "\n";
}

// ---------------------------------------------------------------------------
// simulator

namespace {

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::FrameSpawn;
    std::uint64_t seq = 0;
    TaskId task = 0;
    std::uint64_t aux = 0;  // epoch for task events, frame ordinal for spawns
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.time, a.kind, a.seq) > std::tie(b.time, b.kind, b.seq);
    }
};

struct SimTask {
    Task core;
    std::uint64_t frame = 0;  // global frame ordinal
    std::uint64_t epoch = 0;
    bool reallocated = false;
    bool transfer_started = false;
    bool offloaded = false;
    std::optional<Allocation> alloc;
    std::optional<double> completion;
};

struct SimFrame {
    std::uint64_t ordinal = 0;
    std::uint64_t trace_index = 0;
    DeviceId device = 0;
    double spawn = 0.0;
    int value = -1;
    TaskId hp = 0;
    std::vector<TaskId> lp;
};

struct Request {
    enum class Kind { Hp, Lp, Realloc } kind = Kind::Hp;
    TaskId hp_task = 0;
    std::uint64_t frame = 0;  // for Lp
    TaskId realloc_task = 0;
};

class Simulation {
public:
    Simulation(const SimConfig& cfg, const Trace& trace, std::ostream& log)
        : cfg_(cfg), trace_(trace), log_(log), rng_(cfg.seed ^ 0x9e3779b97f4a7c15ull) {
        const double horizon = cfg_.horizon_frames * cfg_.frame_period_s;
        std::vector<Device> devices;
        for (int d = 0; d < kTraceDevices; ++d)
            devices.push_back(Device{d, 4});
        SchedulerConfig scfg;
        scfg.seed = cfg_.seed;
        scfg.parallel_query = cfg_.parallel_query;
        scfg.padding = cfg_.padding;
        scfg.max_image_bits = cfg_.image_bits;
        scfg.link_exp_buckets = cfg_.link_exp_buckets;
        if (cfg_.scheduler == SchedulerKind::RAS)
            sched_ = std::make_unique<RasScheduler>(devices, 0.0, cfg_.nominal_bw_bps,
                                                    TimeWindow{0.0, horizon}, scfg);
        else
            sched_ = std::make_unique<WpsScheduler>(devices, 0.0,
                                                    cfg_.nominal_bw_bps, scfg);
        table_ = cfg_.scheduler == SchedulerKind::RAS ? ras_reference_latencies()
                                                      : wps_reference_latencies();
    }

    void run() {
        write_meta();
        schedule(0.0, EventKind::FrameSpawn, 0, 0);
        if (cfg_.duty_cycle > 0.0) {
            schedule(0.0, EventKind::TrafficBurstOn, 0, 0);
        }
        if (cfg_.bw_interval_s < cfg_.duration_s)
            schedule(cfg_.bw_interval_s, EventKind::BandwidthProbe, 0, 0);
        while (!events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            dispatch_event(ev);
        }
        finalize();
    }

private:
    const SimConfig& cfg_;
    const Trace& trace_;
    std::ostream& log_;
    Rng rng_;

    std::unique_ptr<Scheduler> sched_;
    LatencyTable table_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t event_seq_ = 0;
    double now_ = 0.0;

    std::map<TaskId, SimTask> tasks_;
    std::vector<SimFrame> frames_;
    TaskId next_task_ = 1;
    std::uint64_t decision_id_ = 1;

    std::deque<Request> queue_;
    bool dispatch_pending_ = false;
    double busy_until_ = 0.0;

    std::set<std::pair<TaskId, std::uint64_t>> inflight_;

    // ---- plumbing

    void schedule(double t, EventKind kind, TaskId task, std::uint64_t aux) {
        events_.push(Event{t, kind, event_seq_++, task, aux});
    }

    void emit(const ordered_json& record) { log_ << record.dump() << "\n"; }

    void write_meta() {
        ordered_json j;
        j["type"] = "meta";
        j["scheduler"] = to_string(cfg_.scheduler);
        j["seed"] = cfg_.seed;
        j["trace"] = cfg_.trace;
        j["frame_period_s"] = cfg_.frame_period_s;
        j["bw_interval_s"] = cfg_.bw_interval_s;
        j["duty_cycle"] = cfg_.duty_cycle;
        j["nominal_bw_bps"] = cfg_.nominal_bw_bps;
        j["duration_s"] = cfg_.duration_s;
        j["latency_model"] =
            cfg_.latency_model == LatencyModel::Measured ? "measured" : "reference";
        emit(j);
    }

    double effective_latency(double table_value, double measured) const {
        return cfg_.latency_model == LatencyModel::Reference ? table_value : measured;
    }

    void enqueue_request(Request req) {
        queue_.push_back(std::move(req));
        if (!dispatch_pending_) {
            dispatch_pending_ = true;
            schedule(std::max(now_, busy_until_), EventKind::ControllerDispatch, 0, 0);
        }
    }

    SimTask& make_task(Priority priority, DeviceId source, double deadline,
                       std::uint64_t frame_ordinal) {
        const TaskId id = next_task_++;
        SimTask st;
        st.core.id = id;
        st.core.source_device = source;
        st.core.priority = priority;
        st.core.deadline = deadline;
        st.core.config = priority == Priority::High
                             ? TaskConfig::make(ConfigKind::HighPriority,
                                                cfg_.padding.hp)
                             : TaskConfig::make(ConfigKind::LowPriority2Core,
                                                cfg_.padding.lp2);
        st.core.input_bits = cfg_.image_bits;
        st.frame = frame_ordinal;
        auto [it, ok] = tasks_.emplace(id, std::move(st));
        schedule(deadline, EventKind::DeadlineCheck, id, 0);
        return it->second;
    }

    // ---- event handlers

    void dispatch_event(const Event& ev) {
        switch (ev.kind) {
            case EventKind::FrameSpawn: return on_frame_spawn(ev.aux);
            case EventKind::HpComplete: return on_task_complete(ev);
            case EventKind::LpRequestIssue: return on_lp_issue(ev);
            case EventKind::TransferStart: return on_transfer_start(ev);
            case EventKind::TransferEnd: return on_transfer_end(ev);
            case EventKind::TaskStart: return on_task_start(ev);
            case EventKind::TaskComplete: return on_task_complete(ev);
            case EventKind::DeadlineCheck: return on_deadline_check(ev);
            case EventKind::BandwidthProbe: return on_bandwidth_probe();
            case EventKind::TrafficBurstOn: return on_burst(true);
            case EventKind::TrafficBurstOff: return on_burst(false);
            case EventKind::ControllerDispatch: return on_dispatch();
        }
    }

    void on_frame_spawn(std::uint64_t trace_index) {
        if (trace_index >= trace_.size())
            return;
        const double spawn = static_cast<double>(trace_index) * cfg_.frame_period_s;
        if (spawn >= cfg_.duration_s)
            return;
        sched_->extend_horizon(spawn + cfg_.horizon_frames * cfg_.frame_period_s);
        for (int d = 0; d < kTraceDevices; ++d) {
            const int value = trace_[trace_index].per_device[d];
            if (value < 0)
                continue;
            SimFrame frame;
            frame.ordinal = frames_.size();
            frame.trace_index = trace_index;
            frame.device = d;
            frame.spawn = spawn;
            frame.value = value;
            SimTask& hp = make_task(
                Priority::High, d,
                spawn + cfg_.deadline_frames * cfg_.frame_period_s, frame.ordinal);
            frame.hp = hp.core.id;
            frames_.push_back(frame);
            enqueue_request(Request{Request::Kind::Hp, hp.core.id, frame.ordinal, 0});
        }
        schedule(spawn + cfg_.frame_period_s, EventKind::FrameSpawn, 0,
                 trace_index + 1);
    }

    void on_burst(bool turning_on) {
        // burst boundaries are markers; effective_bandwidth() is closed-form
        const double interval = cfg_.bw_interval_s;
        if (turning_on) {
            const double off_at = now_ + cfg_.duty_cycle * interval;
            if (off_at < cfg_.duration_s)
                schedule(off_at, EventKind::TrafficBurstOff, 0, 0);
            const double next_on = now_ + interval;
            if (next_on < cfg_.duration_s)
                schedule(next_on, EventKind::TrafficBurstOn, 0, 0);
        }
    }

    void on_lp_issue(const Event& ev) {
        if (ev.task != 0) {
            // reallocation attempt for a preempted task enters the queue now
            enqueue_request(Request{Request::Kind::Realloc, 0, 0, ev.task});
            return;
        }
        const SimFrame& frame = frames_[ev.aux];
        enqueue_request(Request{Request::Kind::Lp, 0, frame.ordinal, 0});
    }

    void on_transfer_start(const Event& ev) {
        auto& st = tasks_.at(ev.task);
        if (ev.aux != st.epoch || st.core.state != TaskState::Allocated ||
            st.transfer_started || !st.alloc || !st.alloc->comm)
            return;
        // a cascade may have shifted the reservation; a fresh event exists then
        if (ev.time + 1e-9 < st.alloc->comm->transfer_start)
            return;
        st.transfer_started = true;
        inflight_.insert({ev.task, st.epoch});
        const double bw = effective_bandwidth(now_, cfg_);
        const double duration = st.core.input_bits / bw;
        schedule(now_ + duration, EventKind::TransferEnd, ev.task, st.epoch);
    }

    void on_transfer_end(const Event& ev) {
        inflight_.erase({ev.task, ev.aux});
        auto& st = tasks_.at(ev.task);
        if (ev.aux != st.epoch || st.core.state != TaskState::Allocated || !st.alloc)
            return;
        const double start = std::max(st.alloc->processing_window.t1, now_);
        schedule(start, EventKind::TaskStart, ev.task, st.epoch);
    }

    void on_task_start(const Event& ev) {
        auto& st = tasks_.at(ev.task);
        if (ev.aux != st.epoch || st.core.state != TaskState::Allocated)
            return;
        st.core.set_state(TaskState::Running);
        const double done = now_ + st.core.config.effective_duration();
        schedule(done,
                 st.core.priority == Priority::High ? EventKind::HpComplete
                                                    : EventKind::TaskComplete,
                 ev.task, st.epoch);
    }

    void on_task_complete(const Event& ev) {
        auto& st = tasks_.at(ev.task);
        if (ev.aux != st.epoch || st.core.state != TaskState::Running)
            return;
        st.completion = now_;
        if (now_ <= st.core.deadline) {
            st.core.set_state(TaskState::Completed);
        } else {
            st.core.set_state(TaskState::ViolatedDeadline);
        }
        sched_->release(ev.task);
        emit_release(ev.task);
        if (st.core.priority == Priority::High &&
            st.core.state == TaskState::Completed) {
            const SimFrame& frame = frames_[st.frame];
            if (frame.value >= 1)
                schedule(now_, EventKind::LpRequestIssue, 0, frame.ordinal);
        }
    }

    void on_deadline_check(const Event& ev) {
        auto& st = tasks_.at(ev.task);
        if (is_terminal(st.core.state))
            return;
        st.core.set_state(TaskState::ViolatedDeadline);
        inflight_.erase({ev.task, st.epoch});
        sched_->release(ev.task);
        emit_release(ev.task);
    }

    void on_bandwidth_probe() {
        const std::size_t host = rng_.pick(kTraceDevices);
        (void)host;  // all peers observe the same shared medium
        const double contended =
            effective_bandwidth(now_, cfg_) /
            static_cast<double>(inflight_.size() + 1);
        const double probe_bits = cfg_.probe_bytes * 8.0;
        std::vector<double> samples;
        for (int peer = 0; peer < kTraceDevices - 1; ++peer) {
            double sum = 0.0;
            for (int p = 0; p < cfg_.probe_count; ++p) {
                const double one_way = probe_bits / contended;
                sum += probe_bits / one_way;
            }
            samples.push_back(sum / cfg_.probe_count);
        }
        const auto outcome = sched_->apply_bandwidth_samples(samples, now_);
        // scheduling stalls while the link representation is rebuilt
        const double stall = effective_latency(table_.bw_update, outcome.latency_s);
        busy_until_ = std::max(busy_until_, now_ + stall);

        for (const TransferMove& mv : outcome.moves) {
            auto it = tasks_.find(mv.task.task);
            if (it == tasks_.end())
                continue;
            SimTask& st = it->second;
            if (st.core.state != TaskState::Allocated || st.transfer_started ||
                !st.alloc || !st.alloc->comm)
                continue;
            if (st.alloc->comm->transfer_id != mv.task.transfer_id)
                continue;
            st.alloc->comm->bucket_index = mv.bucket;
            st.alloc->comm->transfer_start = mv.new_start;
            schedule(mv.new_start, EventKind::TransferStart, st.core.id, st.epoch);
        }
        for (const CommTask& lost : outcome.overflow) {
            auto it = tasks_.find(lost.task);
            if (it == tasks_.end())
                continue;
            SimTask& st = it->second;
            if (st.core.state != TaskState::Allocated || st.transfer_started)
                continue;
            sched_->release(st.core.id);
            emit_release(st.core.id);
            st.core.set_state(TaskState::Preempted);
            ++st.epoch;
            st.alloc.reset();
            schedule(now_, EventKind::LpRequestIssue, st.core.id, 0);
        }

        ordered_json j;
        j["type"] = "bw";
        j["t"] = now_;
        j["bps"] = outcome.estimate_bps;
        j["unit_s"] = outcome.transfer_unit;
        emit(j);

        const double next = now_ + cfg_.bw_interval_s;
        if (next < cfg_.duration_s)
            schedule(next, EventKind::BandwidthProbe, 0, 0);
    }

    // ---- controller

    void on_dispatch() {
        if (queue_.empty()) {
            dispatch_pending_ = false;
            return;
        }
        if (now_ + 1e-12 < busy_until_) {
            schedule(busy_until_, EventKind::ControllerDispatch, 0, 0);
            return;
        }
        const Request req = queue_.front();
        queue_.pop_front();
        double latency = 0.0;
        switch (req.kind) {
            case Request::Kind::Hp: latency = process_hp(req.hp_task); break;
            case Request::Kind::Lp: latency = process_lp(req.frame); break;
            case Request::Kind::Realloc:
                latency = process_realloc(req.realloc_task);
                break;
        }
        busy_until_ = std::max(busy_until_, now_ + latency);
        if (!queue_.empty()) {
            schedule(busy_until_, EventKind::ControllerDispatch, 0, 0);
        } else {
            dispatch_pending_ = false;
        }
    }

    double process_hp(TaskId id) {
        auto& st = tasks_.at(id);
        if (st.core.state != TaskState::Pending)
            return 0.0;
        const SchedulerDecision d = sched_->schedule_high_priority(st.core, now_);
        double latency = effective_latency(table_.hp_initial, d.latency_s);
        bool preempted = false;
        std::optional<TaskId> victim;
        Outcome outcome = d.outcome;
        std::vector<Allocation> allocations = d.allocations;

        if (d.outcome == Outcome::PreemptionIssued) {
            preempted = true;
            const PreemptResult pr = sched_->preempt(*d.preemption);
            latency += effective_latency(table_.hp_preempt, pr.decision.latency_s);
            outcome = pr.decision.outcome;
            allocations = pr.decision.allocations;
            if (pr.victim) {
                victim = pr.victim;
                evict_victim(*pr.victim, now_ + latency);
            }
        }

        if (outcome == Outcome::Allocated) {
            apply_allocation(st, allocations.front());
        } else {
            st.core.set_state(TaskState::Rejected);
        }
        log_decision("hp", outcome, allocations, st.core.config.kind, latency,
                     {id}, preempted, victim, false);
        return latency;
    }

    double process_lp(std::uint64_t frame_ordinal) {
        SimFrame& frame = frames_[frame_ordinal];
        LpRequest req;
        req.source = frame.device;
        req.deadline = frame.spawn + cfg_.deadline_frames * cfg_.frame_period_s;
        req.issue_time = now_;
        std::vector<TaskId> ids;
        for (int i = 0; i < frame.value; ++i) {
            SimTask& st = make_task(Priority::Low, frame.device, req.deadline,
                                    frame.ordinal);
            frame.lp.push_back(st.core.id);
            ids.push_back(st.core.id);
            req.tasks.push_back(LpTaskSpec{st.core.id, cfg_.image_bits});
        }
        const SchedulerDecision d = sched_->schedule_low_priority(req, now_);
        const double latency = effective_latency(table_.lp_initial, d.latency_s);
        settle_lp_decision(d, ids, false);
        log_decision("lp", d.outcome, d.allocations, d.chosen_config, latency, ids,
                     false, std::nullopt, false);
        return latency;
    }

    double process_realloc(TaskId id) {
        auto& st = tasks_.at(id);
        if (st.core.state != TaskState::Preempted)
            return 0.0;
        if (now_ >= st.core.deadline) {
            st.core.set_state(TaskState::ViolatedDeadline);
            emit_release(id);
            return 0.0;
        }
        LpRequest req;
        req.source = st.core.source_device;
        req.deadline = st.core.deadline;
        req.issue_time = now_;
        req.reallocation = true;
        req.tasks.push_back(LpTaskSpec{id, st.core.input_bits});
        const SchedulerDecision d = sched_->schedule_low_priority(req, now_);
        const double latency = effective_latency(table_.lp_realloc, d.latency_s);
        settle_lp_decision(d, {id}, true);
        log_decision("lp", d.outcome, d.allocations, d.chosen_config, latency, {id},
                     false, std::nullopt, true);
        return latency;
    }

    void settle_lp_decision(const SchedulerDecision& d,
                            const std::vector<TaskId>& ids, bool realloc) {
        if (d.outcome == Outcome::Allocated) {
            for (const Allocation& a : d.allocations) {
                auto& st = tasks_.at(a.task);
                st.core.config = TaskConfig::make(
                    d.chosen_config, cfg_.padding.for_kind(d.chosen_config));
                if (realloc)
                    st.reallocated = true;
                apply_allocation(st, a);
            }
        } else {
            for (TaskId id : ids)
                tasks_.at(id).core.set_state(TaskState::Rejected);
        }
    }

    void apply_allocation(SimTask& st, const Allocation& alloc) {
        st.core.set_state(TaskState::Allocated);
        ++st.epoch;
        st.alloc = alloc;
        st.transfer_started = false;
        st.offloaded = alloc.device != st.core.source_device;
        ordered_json j;
        j["type"] = "alloc";
        j["t"] = now_;
        j["task"] = st.core.id;
        j["device"] = alloc.device;
        j["cores"] = alloc.cores;
        j["t1"] = alloc.processing_window.t1;
        j["t2"] = alloc.processing_window.t2;
        if (alloc.comm) {
            j["bucket"] = alloc.comm->bucket_index;
            j["transfer_start"] = alloc.comm->transfer_start;
        }
        emit(j);
        if (alloc.comm) {
            schedule(alloc.comm->transfer_start, EventKind::TransferStart,
                     st.core.id, st.epoch);
        } else {
            schedule(alloc.processing_window.t1, EventKind::TaskStart, st.core.id,
                     st.epoch);
        }
    }

    void evict_victim(TaskId id, double realloc_at) {
        auto& st = tasks_.at(id);
        inflight_.erase({id, st.epoch});
        st.core.set_state(TaskState::Preempted);
        ++st.epoch;
        st.alloc.reset();
        st.transfer_started = false;
        emit_release(id);
        // the victim re-enters low-priority scheduling once the pre-emption
        // call has finished
        schedule(realloc_at, EventKind::LpRequestIssue, id, 0);
    }

    void emit_release(TaskId id) {
        ordered_json j;
        j["type"] = "release";
        j["t"] = now_;
        j["task"] = id;
        emit(j);
    }

    void log_decision(const char* kind, Outcome outcome,
                      const std::vector<Allocation>& allocations,
                      ConfigKind config, double latency,
                      const std::vector<TaskId>& ids, bool preempted,
                      std::optional<TaskId> victim, bool realloc) {
        ordered_json j;
        j["type"] = "decision";
        j["id"] = decision_id_++;
        j["t"] = now_;
        j["kind"] = kind;
        j["realloc"] = realloc;
        j["outcome"] = to_string(outcome);
        j["config"] = to_string(config);
        j["latency_us"] =
            static_cast<std::uint64_t>(std::llround(latency * 1e6));
        j["tasks"] = ids;
        ordered_json devices = ordered_json::array();
        ordered_json windows = ordered_json::array();
        ordered_json buckets = ordered_json::array();
        for (const Allocation& a : allocations) {
            devices.push_back(a.device);
            windows.push_back({a.processing_window.t1, a.processing_window.t2});
            if (a.comm)
                buckets.push_back(a.comm->bucket_index);
        }
        j["devices"] = devices;
        j["windows"] = windows;
        j["buckets"] = buckets;
        if (preempted)
            j["preempted"] = true;
        if (victim)
            j["victim"] = *victim;
        emit(j);
    }

    void finalize() {
        for (const auto& [id, st] : tasks_) {
            ordered_json j;
            j["type"] = "task";
            j["id"] = id;
            j["frame"] = st.frame;
            j["source"] = st.core.source_device;
            j["priority"] = st.core.priority == Priority::High ? "high" : "low";
            j["config"] = to_string(st.core.config.kind);
            j["state"] = to_string(st.core.state);
            j["spawn"] = frames_[st.frame].spawn;
            j["deadline"] = st.core.deadline;
            if (st.completion)
                j["completion"] = *st.completion;
            if (st.alloc)
                j["device"] = st.alloc->device;
            j["offloaded"] = st.offloaded;
            j["reallocated"] = st.reallocated;
            emit(j);
        }
        for (const SimFrame& frame : frames_) {
            bool completed =
                tasks_.at(frame.hp).core.state == TaskState::Completed &&
                static_cast<int>(frame.lp.size()) == frame.value;
            for (TaskId id : frame.lp)
                completed = completed &&
                            tasks_.at(id).core.state == TaskState::Completed;
            ordered_json j;
            j["type"] = "frame";
            j["index"] = frame.ordinal;
            j["trace_index"] = frame.trace_index;
            j["device"] = frame.device;
            j["spawn"] = frame.spawn;
            j["value"] = frame.value;
            j["completed"] = completed;
            emit(j);
        }
    }
};

} // namespace

void run_simulation(const SimConfig& cfg, const Trace& trace, std::ostream& log) {
    cfg.validate();
    Simulation sim(cfg, trace, log);
    sim.run();
}

void run_simulation(const SimConfig& cfg, std::ostream& log) {
    const Trace trace = load_trace(cfg.trace);
    run_simulation(cfg, trace, log);
}

} // namespace edgesched
