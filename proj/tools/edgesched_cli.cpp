#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgesched/metrics.hpp"
#include "edgesched/presets.hpp"
#include "edgesched/sim.hpp"
#include "edgesched/trace.hpp"

namespace fs = std::filesystem;
using namespace edgesched;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunOptions {
    std::string config_path;
    std::string out_dir = "run_out";
    std::string scheduler = "ras";
    std::string latency_model = "measured";
    SimConfig cfg;
};

void add_sim_flags(CLI::App* cmd, RunOptions& opt) {
    cmd->add_option("--config", opt.config_path, "run configuration file");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--trace", opt.cfg.trace, "trace file path");
    cmd->add_option("--scheduler", opt.scheduler, "ras|wps");
    cmd->add_option("--frame_period_s", opt.cfg.frame_period_s);
    cmd->add_option("--bw_interval_s", opt.cfg.bw_interval_s);
    cmd->add_option("--duty_cycle", opt.cfg.duty_cycle);
    cmd->add_option("--nominal_bw_bps", opt.cfg.nominal_bw_bps);
    cmd->add_option("--probe_count", opt.cfg.probe_count);
    cmd->add_option("--probe_bytes", opt.cfg.probe_bytes);
    cmd->add_option("--traffic_bytes", opt.cfg.traffic_bytes);
    cmd->add_option("--seed", opt.cfg.seed);
    cmd->add_option("--duration_s", opt.cfg.duration_s);
    cmd->add_option("--traffic_load", opt.cfg.traffic_load);
    cmd->add_option("--deadline_frames", opt.cfg.deadline_frames);
    cmd->add_option("--latency_model", opt.latency_model, "measured|reference");
    cmd->add_option("--image_bits", opt.cfg.image_bits);
    cmd->add_option("--link_exp_buckets", opt.cfg.link_exp_buckets);
    cmd->add_option("--horizon_frames", opt.cfg.horizon_frames);
    cmd->add_option("--parallel_query", opt.cfg.parallel_query);
    cmd->add_option("--padding_hp_s", opt.cfg.padding.hp);
    cmd->add_option("--padding_lp2_s", opt.cfg.padding.lp2);
    cmd->add_option("--padding_lp4_s", opt.cfg.padding.lp4);
}

SimConfig resolve_config(const CLI::App* cmd, const RunOptions& opt) {
    SimConfig cfg;
    if (!opt.config_path.empty())
        cfg = load_sim_config(opt.config_path);
    // command-line flags override file values
    auto take = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (take("--trace")) cfg.trace = opt.cfg.trace;
    if (take("--scheduler")) cfg.scheduler = scheduler_kind_from_string(opt.scheduler);
    if (take("--frame_period_s")) cfg.frame_period_s = opt.cfg.frame_period_s;
    if (take("--bw_interval_s")) cfg.bw_interval_s = opt.cfg.bw_interval_s;
    if (take("--duty_cycle")) cfg.duty_cycle = opt.cfg.duty_cycle;
    if (take("--nominal_bw_bps")) cfg.nominal_bw_bps = opt.cfg.nominal_bw_bps;
    if (take("--probe_count")) cfg.probe_count = opt.cfg.probe_count;
    if (take("--probe_bytes")) cfg.probe_bytes = opt.cfg.probe_bytes;
    if (take("--traffic_bytes")) cfg.traffic_bytes = opt.cfg.traffic_bytes;
    if (take("--seed")) cfg.seed = opt.cfg.seed;
    if (take("--duration_s")) cfg.duration_s = opt.cfg.duration_s;
    if (take("--traffic_load")) cfg.traffic_load = opt.cfg.traffic_load;
    if (take("--deadline_frames")) cfg.deadline_frames = opt.cfg.deadline_frames;
    if (take("--latency_model"))
        cfg.latency_model = opt.latency_model == "reference"
                                ? LatencyModel::Reference
                                : LatencyModel::Measured;
    if (take("--image_bits")) cfg.image_bits = opt.cfg.image_bits;
    if (take("--link_exp_buckets")) cfg.link_exp_buckets = opt.cfg.link_exp_buckets;
    if (take("--horizon_frames")) cfg.horizon_frames = opt.cfg.horizon_frames;
    if (take("--parallel_query")) cfg.parallel_query = opt.cfg.parallel_query;
    if (take("--padding_hp_s")) cfg.padding.hp = opt.cfg.padding.hp;
    if (take("--padding_lp2_s")) cfg.padding.lp2 = opt.cfg.padding.lp2;
    if (take("--padding_lp4_s")) cfg.padding.lp4 = opt.cfg.padding.lp4;
    cfg.validate();
    return cfg;
}

RunReport run_one(const SimConfig& cfg, const fs::path& dir,
                  const std::string& name) {
    fs::create_directories(dir);
    const fs::path log_path = dir / (name + ".jsonl");
    {
        std::ofstream log(log_path);
        if (!log)
            throw std::runtime_error("cannot write " + log_path.string());
        run_simulation(cfg, log);
    }
    const RunReport report = aggregate_file(log_path.string());
    std::ofstream rep(dir / (name + ".report.json"));
    rep << report_to_json(report);
    return report;
}

int cmd_trace_gen(const std::string& kind, std::size_t frames,
                  std::uint64_t seed, double dominant, const std::string& out) {
    const Trace trace = generate_trace(trace_kind_from_string(kind), frames,
                                       seed, dominant);
    if (out.empty() || out == "-") {
        write_trace(trace, std::cout);
    } else {
        save_trace(trace, out);
    }
    return 0;
}

int cmd_run(const CLI::App* cmd, const RunOptions& opt) {
    const SimConfig cfg = resolve_config(cmd, opt);
    if (cfg.trace.empty())
        throw std::invalid_argument("no trace file given (use --trace)");
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg_out(dir / "run.cfg");
        write_sim_config(cfg, cfg_out);
    }
    const RunReport report = run_one(cfg, dir, "run");
    std::ofstream summary(dir / "summary.csv");
    summary << summary_csv_header() << summary_csv_row("run", report);
    std::cout << "frames " << report.frames_completed << "/"
              << report.frames_total << " completed; report in "
              << (dir / "run.report.json").string() << "\n";
    return 0;
}

int cmd_preset(const CLI::App* cmd, const RunOptions& opt,
               const std::string& name, int seeds) {
    const SimConfig base = resolve_config(cmd, opt);
    const auto runs = experiment_preset(name, base);
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);

    std::ofstream summary(dir / "summary.csv");
    summary << summary_csv_header();
    std::ofstream breakdown(dir / "breakdown.csv");
    breakdown << breakdown_csv_header();

    // pooled core-allocation counts per duty cycle, for the congestion table
    std::map<double, std::pair<std::uint64_t, std::uint64_t>> core_mix;

    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = base.seed + static_cast<std::uint64_t>(s);
        std::map<TraceKind, std::string> traces;
        for (const PresetRun& run : runs) {
            if (!traces.count(run.trace_kind)) {
                const fs::path trace_path =
                    dir / (std::string(to_string(run.trace_kind)) + "_s" +
                           std::to_string(seed) + ".trace");
                const std::size_t frames = static_cast<std::size_t>(
                    std::ceil(run.config.duration_s / run.config.frame_period_s)) + 1;
                save_trace(generate_trace(run.trace_kind, frames, seed),
                           trace_path.string());
                traces[run.trace_kind] = trace_path.string();
            }
        }
        for (const PresetRun& run : runs) {
            SimConfig cfg = run.config;
            cfg.seed = seed;
            cfg.trace = traces.at(run.trace_kind);
            const std::string run_id = run.name + "_s" + std::to_string(seed);
            std::ofstream cfg_out(dir / (run_id + ".cfg"));
            write_sim_config(cfg, cfg_out);
            cfg_out.close();
            const RunReport report = run_one(cfg, dir, run_id);
            summary << summary_csv_row(run_id, report);
            breakdown << breakdown_csv_rows(run_id, report);
            auto& mix = core_mix[cfg.duty_cycle];
            mix.first += report.alloc_two_core;
            mix.second += report.alloc_four_core;
            std::cout << run_id << ": frames " << report.frames_completed << "/"
                      << report.frames_total << "\n";
        }
    }

    if (name == "congestion_sweep") {
        std::ofstream table(dir / "core_allocation.csv");
        table << "cores";
        for (const auto& [duty, mix] : core_mix)
            table << ",duty" << static_cast<int>(duty * 100);
        table << "\n";
        auto pct = [](std::uint64_t part, std::uint64_t total) {
            std::ostringstream os;
            os.precision(2);
            os << std::fixed
               << (total ? 100.0 * static_cast<double>(part) /
                               static_cast<double>(total)
                         : 0.0);
            return os.str();
        };
        table << "two_core";
        for (const auto& [duty, mix] : core_mix)
            table << "," << pct(mix.first, mix.first + mix.second);
        table << "\nfour_core";
        for (const auto& [duty, mix] : core_mix)
            table << "," << pct(mix.second, mix.first + mix.second);
        table << "\n";
    }
    return 0;
}

int cmd_report(const std::string& log, const std::string& format,
               const std::string& out) {
    const RunReport report = aggregate_file(log);
    std::ostringstream body;
    if (format == "json") {
        body << report_to_json(report);
    } else if (format == "csv") {
        body << summary_csv_header() << summary_csv_row(log, report);
    } else {
        throw std::invalid_argument("format must be csv or json");
    }
    if (out.empty() || out == "-") {
        std::cout << body.str();
    } else {
        std::ofstream f(out);
        if (!f)
            throw std::runtime_error("cannot write " + out);
        f << body.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deadline-constrained offloading scheduler and simulator"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("trace-gen", "generate a workload trace");
    std::string gen_kind = "uniform";
    std::size_t gen_frames = 100;
    std::uint64_t gen_seed = 1;
    double gen_dominant = 0.7;
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "uniform|weighted1..weighted4");
    gen->add_option("--frames", gen_frames)->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--dominant", gen_dominant);
    gen->add_option("--out", gen_out, "output path ('-' for stdout)");

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "simulate one configuration");
    add_sim_flags(run, run_opt);

    RunOptions preset_opt;
    auto* preset = app.add_subcommand("preset", "run an experiment preset");
    std::string preset_name = "compare";
    int preset_seeds = 1;
    preset->add_option("--name", preset_name,
                       "compare|bw_sweep|congestion_sweep");
    preset->add_option("--seeds", preset_seeds, "number of seeds per run")
        ->check(CLI::PositiveNumber);
    add_sim_flags(preset, preset_opt);

    auto* report = app.add_subcommand("report", "aggregate a run log");
    std::string report_log, report_format = "json", report_out;
    report->add_option("--log", report_log)->required();
    report->add_option("--format", report_format, "csv|json");
    report->add_option("--out", report_out, "output path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed())
            return cmd_trace_gen(gen_kind, gen_frames, gen_seed, gen_dominant,
                                 gen_out);
        if (run->parsed())
            return cmd_run(run, run_opt);
        if (preset->parsed())
            return cmd_preset(preset, preset_opt, preset_name, preset_seeds);
        if (report->parsed())
            return cmd_report(report_log, report_format, report_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
