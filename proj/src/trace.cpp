#include "edgesched/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgesched/rng.hpp"

namespace edgesched {

Trace parse_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#')
            continue;
        TraceEntry entry;
        entry.frame_index = trace.size();
        std::stringstream ss(line);
        std::string field;
        int column = 0;
        while (std::getline(ss, field, ',')) {
            if (column >= kTraceDevices)
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": more than 4 values");
            int value = 0;
            try {
                value = std::stoi(field);
            } catch (const std::exception&) {
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": not an integer: '" + field + "'");
            }
            if (value < -1 || value > 4)
                throw std::runtime_error("trace line " + std::to_string(line_no) +
                                         ": value out of range [-1,4]");
            entry.per_device[column++] = value;
        }
        if (column != kTraceDevices)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": expected 4 values, got " + std::to_string(column));
        trace.push_back(entry);
    }
    return trace;
}

Trace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + path);
    return parse_trace(in);
}

void write_trace(const Trace& trace, std::ostream& out) {
    for (const TraceEntry& e : trace) {
        for (int d = 0; d < kTraceDevices; ++d) {
            if (d) out << ',';
            out << e.per_device[d];
        }
        out << '\n';
    }
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write trace file: " + path);
    write_trace(trace, out);
}

TraceKind trace_kind_from_string(const std::string& name) {
    if (name == "uniform") return TraceKind::Uniform;
    if (name == "weighted1") return TraceKind::Weighted1;
    if (name == "weighted2") return TraceKind::Weighted2;
    if (name == "weighted3") return TraceKind::Weighted3;
    if (name == "weighted4") return TraceKind::Weighted4;
    throw std::invalid_argument("unknown trace kind: " + name);
}

const char* to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::Uniform: return "uniform";
        case TraceKind::Weighted1: return "weighted1";
        case TraceKind::Weighted2: return "weighted2";
        case TraceKind::Weighted3: return "weighted3";
        case TraceKind::Weighted4: return "weighted4";
    }
    return "?";
}

namespace {

int draw_value(TraceKind kind, double dominant, Rng& rng) {
    if (kind == TraceKind::Uniform)
        return 1 + static_cast<int>(rng.pick(4));
    const int favored = 1 + (static_cast<int>(kind) - static_cast<int>(TraceKind::Weighted1));
    const double u = rng.uniform();
    if (u < dominant)
        return favored;
    // remainder split evenly over the other five values in {-1,0,1..4}
    const double rest = (u - dominant) / (1.0 - dominant);
    int slot = static_cast<int>(rest * 5.0);
    if (slot > 4) slot = 4;
    static constexpr int all[6] = {-1, 0, 1, 2, 3, 4};
    int idx = 0;
    for (int v : all) {
        if (v == favored)
            continue;
        if (idx == slot)
            return v;
        ++idx;
    }
    return -1;
}

} // namespace

Trace generate_trace(TraceKind kind, std::size_t frames, std::uint64_t seed,
                     double dominant) {
    if (frames == 0)
        throw std::invalid_argument("trace must have at least one frame");
    if (dominant <= 0.0 || dominant >= 1.0)
        throw std::invalid_argument("dominant probability must be in (0,1)");
    Rng rng(seed);
    Trace trace(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        trace[f].frame_index = f;
        for (int d = 0; d < kTraceDevices; ++d)
            trace[f].per_device[d] = draw_value(kind, dominant, rng);
    }
    return trace;
}

} // namespace edgesched
