#include "edgesched/presets.hpp"

#include <stdexcept>

namespace edgesched {

namespace {

std::string run_name(SchedulerKind sched, TraceKind kind, const std::string& tag) {
    std::string name = to_string(sched);
    name += "_";
    name += to_string(kind);
    if (!tag.empty())
        name += "_" + tag;
    return name;
}

} // namespace

std::vector<PresetRun> experiment_preset(const std::string& name,
                                         const SimConfig& base) {
    std::vector<PresetRun> runs;
    SimConfig proto = base;
    proto.latency_model = LatencyModel::Reference;
    proto.trace.clear();

    if (name == "compare") {
        for (SchedulerKind sched : {SchedulerKind::RAS, SchedulerKind::WPS}) {
            for (TraceKind kind : {TraceKind::Weighted1, TraceKind::Weighted2,
                                   TraceKind::Weighted3, TraceKind::Weighted4}) {
                SimConfig cfg = proto;
                cfg.scheduler = sched;
                runs.push_back(PresetRun{run_name(sched, kind, ""), cfg, kind});
            }
        }
    } else if (name == "bw_sweep") {
        for (double interval : {1.5, 5.0, 10.0, 20.0, 30.0}) {
            SimConfig cfg = proto;
            cfg.scheduler = SchedulerKind::RAS;
            cfg.bw_interval_s = interval;
            cfg.duration_s = 1800.0;  // a 30 minute slice
            std::string tag = "bw" + std::to_string(interval);
            tag.erase(tag.find_last_not_of('0') + 1);
            if (!tag.empty() && tag.back() == '.')
                tag.pop_back();
            runs.push_back(
                PresetRun{run_name(cfg.scheduler, TraceKind::Weighted4, tag), cfg,
                          TraceKind::Weighted4});
        }
    } else if (name == "congestion_sweep") {
        for (double duty : {0.0, 0.25, 0.5, 0.75}) {
            SimConfig cfg = proto;
            cfg.scheduler = SchedulerKind::RAS;
            cfg.bw_interval_s = 30.0;
            cfg.duty_cycle = duty;
            cfg.duration_s = 1800.0;
            std::string tag = "duty" + std::to_string(static_cast<int>(duty * 100));
            runs.push_back(
                PresetRun{run_name(cfg.scheduler, TraceKind::Weighted4, tag), cfg,
                          TraceKind::Weighted4});
        }
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return runs;
}

} // namespace edgesched
