#include "edgesched/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace edgesched {

using ordered_json = nlohmann::ordered_json;

RunReport aggregate(std::istream& log) {
    RunReport r;
    double hp_direct_latency = 0.0;
    double hp_preempt_latency = 0.0;
    double lp_initial_latency = 0.0;
    std::uint64_t lp_initial_allocated = 0;
    double lp_realloc_latency = 0.0;
    std::uint64_t lp_realloc_allocated = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(log, line)) {
        ++line_no;
        if (line.empty())
            continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("run log line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
        const std::string type = j.value("type", "");
        if (type == "meta") {
            r.scheduler = j.value("scheduler", "");
            r.seed = j.value("seed", std::uint64_t{0});
            r.trace = j.value("trace", "");
            r.duration_s = j.value("duration_s", 0.0);
            r.bw_interval_s = j.value("bw_interval_s", 0.0);
            r.duty_cycle = j.value("duty_cycle", 0.0);
        } else if (type == "frame") {
            ++r.frames_total;
            if (j.value("completed", false))
                ++r.frames_completed;
        } else if (type == "task") {
            const bool high = j.value("priority", "") == "high";
            const std::string state = j.value("state", "");
            if (high) {
                ++r.hp_spawned;
                if (state == "completed") ++r.hp_completed;
                else if (state == "rejected") ++r.hp_rejected;
                else if (state == "violated") ++r.hp_violated;
            } else {
                ++r.lp_spawned;
                if (state == "completed") ++r.lp_completed;
                else if (state == "rejected") ++r.lp_rejected;
                else if (state == "violated") ++r.lp_violated;
                if (j.value("offloaded", false)) {
                    ++r.offloaded_count;
                    if (state == "completed")
                        ++r.offloaded_completed;
                }
            }
        } else if (type == "decision") {
            const std::string kind = j.value("kind", "");
            const bool allocated = j.value("outcome", "") == "allocated";
            const double latency =
                static_cast<double>(j.value("latency_us", std::uint64_t{0})) / 1e6;
            if (kind == "hp") {
                if (allocated && j.value("preempted", false)) {
                    ++r.hp_alloc_via_preempt;
                    hp_preempt_latency += latency;
                } else if (allocated) {
                    ++r.hp_alloc_direct;
                    hp_direct_latency += latency;
                }
            } else if (kind == "lp" && allocated) {
                const std::string config = j.value("config", "");
                const std::size_t tasks = j.value("tasks", ordered_json::array()).size();
                if (config == "lp2")
                    r.alloc_two_core += tasks;
                else if (config == "lp4")
                    r.alloc_four_core += tasks;
                if (j.value("realloc", false)) {
                    r.lp_reallocated += tasks;
                    lp_realloc_latency += latency;
                    ++lp_realloc_allocated;
                } else {
                    lp_initial_latency += latency;
                    ++lp_initial_allocated;
                }
            }
        } else if (type == "bw") {
            r.bandwidth_series.emplace_back(j.value("t", 0.0), j.value("bps", 0.0));
        } else if (type == "alloc" || type == "release") {
            // consumed by the accounting oracle, not by the report
        } else if (!type.empty()) {
            throw std::runtime_error("run log line " + std::to_string(line_no) +
                                     ": unknown record type '" + type + "'");
        }
    }

    if (r.hp_alloc_direct)
        r.hp_mean_latency_direct_s =
            hp_direct_latency / static_cast<double>(r.hp_alloc_direct);
    if (r.hp_alloc_via_preempt)
        r.hp_mean_latency_preempt_s =
            hp_preempt_latency / static_cast<double>(r.hp_alloc_via_preempt);
    if (lp_initial_allocated)
        r.lp_mean_initial_latency_s =
            lp_initial_latency / static_cast<double>(lp_initial_allocated);
    if (lp_realloc_allocated)
        r.lp_mean_realloc_latency_s =
            lp_realloc_latency / static_cast<double>(lp_realloc_allocated);
    return r;
}

RunReport aggregate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open run log: " + path);
    return aggregate(in);
}

namespace {

ordered_json report_json(const RunReport& r) {
    ordered_json j;
    j["scheduler"] = r.scheduler;
    j["seed"] = r.seed;
    j["trace"] = r.trace;
    j["duration_s"] = r.duration_s;
    j["bw_interval_s"] = r.bw_interval_s;
    j["duty_cycle"] = r.duty_cycle;
    j["frames_total"] = r.frames_total;
    j["frames_completed"] = r.frames_completed;
    j["frame_completion_rate"] = r.frame_completion_rate();
    j["hp_spawned"] = r.hp_spawned;
    j["hp_completed"] = r.hp_completed;
    j["hp_alloc_direct"] = r.hp_alloc_direct;
    j["hp_alloc_via_preempt"] = r.hp_alloc_via_preempt;
    j["hp_rejected"] = r.hp_rejected;
    j["hp_violated"] = r.hp_violated;
    j["hp_mean_latency_direct_ms"] = r.hp_mean_latency_direct_s * 1e3;
    j["hp_mean_latency_preempt_ms"] = r.hp_mean_latency_preempt_s * 1e3;
    j["lp_spawned"] = r.lp_spawned;
    j["lp_completed"] = r.lp_completed;
    j["lp_violated"] = r.lp_violated;
    j["lp_rejected"] = r.lp_rejected;
    j["lp_reallocated"] = r.lp_reallocated;
    j["lp_mean_initial_latency_ms"] = r.lp_mean_initial_latency_s * 1e3;
    j["lp_mean_realloc_latency_ms"] = r.lp_mean_realloc_latency_s * 1e3;
    j["offloaded_count"] = r.offloaded_count;
    j["offloaded_completed"] = r.offloaded_completed;
    j["offloaded_completion_rate"] = r.offloaded_completion_rate();
    j["alloc_two_core"] = r.alloc_two_core;
    j["alloc_four_core"] = r.alloc_four_core;
    j["two_core_fraction"] = r.two_core_fraction();
    j["four_core_fraction"] = r.four_core_fraction();
    ordered_json series = ordered_json::array();
    for (const auto& [t, bps] : r.bandwidth_series)
        series.push_back({t, bps});
    j["bandwidth_series"] = series;
    return j;
}

} // namespace

std::string report_to_json(const RunReport& r) {
    return report_json(r).dump(2) + "\n";
}

RunReport report_from_json(std::istream& in) {
    ordered_json j = ordered_json::parse(in);
    RunReport r;
    r.scheduler = j.value("scheduler", "");
    r.seed = j.value("seed", std::uint64_t{0});
    r.trace = j.value("trace", "");
    r.duration_s = j.value("duration_s", 0.0);
    r.bw_interval_s = j.value("bw_interval_s", 0.0);
    r.duty_cycle = j.value("duty_cycle", 0.0);
    r.frames_total = j.value("frames_total", std::uint64_t{0});
    r.frames_completed = j.value("frames_completed", std::uint64_t{0});
    r.hp_spawned = j.value("hp_spawned", std::uint64_t{0});
    r.hp_completed = j.value("hp_completed", std::uint64_t{0});
    r.hp_alloc_direct = j.value("hp_alloc_direct", std::uint64_t{0});
    r.hp_alloc_via_preempt = j.value("hp_alloc_via_preempt", std::uint64_t{0});
    r.hp_rejected = j.value("hp_rejected", std::uint64_t{0});
    r.hp_violated = j.value("hp_violated", std::uint64_t{0});
    r.hp_mean_latency_direct_s = j.value("hp_mean_latency_direct_ms", 0.0) / 1e3;
    r.hp_mean_latency_preempt_s = j.value("hp_mean_latency_preempt_ms", 0.0) / 1e3;
    r.lp_spawned = j.value("lp_spawned", std::uint64_t{0});
    r.lp_completed = j.value("lp_completed", std::uint64_t{0});
    r.lp_violated = j.value("lp_violated", std::uint64_t{0});
    r.lp_rejected = j.value("lp_rejected", std::uint64_t{0});
    r.lp_reallocated = j.value("lp_reallocated", std::uint64_t{0});
    r.lp_mean_initial_latency_s = j.value("lp_mean_initial_latency_ms", 0.0) / 1e3;
    r.lp_mean_realloc_latency_s = j.value("lp_mean_realloc_latency_ms", 0.0) / 1e3;
    r.offloaded_count = j.value("offloaded_count", std::uint64_t{0});
    r.offloaded_completed = j.value("offloaded_completed", std::uint64_t{0});
    r.alloc_two_core = j.value("alloc_two_core", std::uint64_t{0});
    r.alloc_four_core = j.value("alloc_four_core", std::uint64_t{0});
    for (const auto& p : j.value("bandwidth_series", ordered_json::array()))
        r.bandwidth_series.emplace_back(p[0].get<double>(), p[1].get<double>());
    return r;
}

std::string summary_csv_header() {
    return "run_id,scheduler,seed,trace,duration_s,bw_interval_s,duty_cycle,"
           "frames_total,frames_completed,frame_completion_rate,"
           "hp_spawned,hp_completed,hp_alloc_direct,hp_alloc_via_preempt,"
           "hp_rejected,hp_violated,hp_mean_latency_direct_ms,"
           "hp_mean_latency_preempt_ms,lp_spawned,lp_completed,lp_violated,"
           "lp_rejected,lp_reallocated,lp_mean_initial_latency_ms,"
           "lp_mean_realloc_latency_ms,offloaded_count,offloaded_completed,"
           "offloaded_completion_rate,two_core_fraction,four_core_fraction\n";
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

} // namespace

std::string summary_csv_row(const std::string& run_id, const RunReport& r) {
    std::ostringstream os;
    os << run_id << ',' << r.scheduler << ',' << r.seed << ',' << r.trace << ','
       << fmt(r.duration_s) << ',' << fmt(r.bw_interval_s) << ','
       << fmt(r.duty_cycle) << ',' << r.frames_total << ',' << r.frames_completed
       << ',' << fmt(r.frame_completion_rate()) << ',' << r.hp_spawned << ','
       << r.hp_completed << ',' << r.hp_alloc_direct << ','
       << r.hp_alloc_via_preempt << ',' << r.hp_rejected << ',' << r.hp_violated
       << ',' << fmt(r.hp_mean_latency_direct_s * 1e3) << ','
       << fmt(r.hp_mean_latency_preempt_s * 1e3) << ',' << r.lp_spawned << ','
       << r.lp_completed << ',' << r.lp_violated << ',' << r.lp_rejected << ','
       << r.lp_reallocated << ',' << fmt(r.lp_mean_initial_latency_s * 1e3) << ','
       << fmt(r.lp_mean_realloc_latency_s * 1e3) << ',' << r.offloaded_count
       << ',' << r.offloaded_completed << ','
       << fmt(r.offloaded_completion_rate()) << ',' << fmt(r.two_core_fraction())
       << ',' << fmt(r.four_core_fraction()) << '\n';
    return os.str();
}

std::string breakdown_csv_header() { return "run_id,category,value\n"; }

std::string breakdown_csv_rows(const std::string& run_id, const RunReport& r) {
    std::ostringstream os;
    auto row = [&](const char* category, std::uint64_t value) {
        os << run_id << ',' << category << ',' << value << '\n';
    };
    row("frames_total", r.frames_total);
    row("frames_completed", r.frames_completed);
    row("hp_alloc_direct", r.hp_alloc_direct);
    row("hp_alloc_via_preempt", r.hp_alloc_via_preempt);
    row("hp_completed", r.hp_completed);
    row("lp_completed", r.lp_completed);
    row("lp_violated", r.lp_violated);
    row("lp_rejected", r.lp_rejected);
    row("lp_reallocated", r.lp_reallocated);
    row("offloaded_count", r.offloaded_count);
    row("offloaded_completed", r.offloaded_completed);
    return os.str();
}

} // namespace edgesched
