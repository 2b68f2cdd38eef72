#ifndef EDGESCHED_PRESETS_HPP
#define EDGESCHED_PRESETS_HPP

#include <string>
#include <vector>

#include "edgesched/sim.hpp"
#include "edgesched/trace.hpp"

namespace edgesched {

struct PresetRun {
    std::string name;       // e.g. "ras_weighted3_s1"
    SimConfig config;       // trace path left empty; the runner fills it in
    TraceKind trace_kind;
};

/// Expand an experiment preset into run configurations derived from `base`:
///   compare          — {ras, wps} x {weighted1..4}
///   bw_sweep         — ras x weighted4 x update intervals {1.5, 5, 10, 20, 30} s
///   congestion_sweep — ras x weighted4 x duty cycles {0, 0.25, 0.5, 0.75}
/// Preset runs use the reference latency model so results are repeatable
/// across machines.
std::vector<PresetRun> experiment_preset(const std::string& name,
                                         const SimConfig& base);

} // namespace edgesched

#endif
