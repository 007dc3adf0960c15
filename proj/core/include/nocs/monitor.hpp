#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nocs/types.hpp"

namespace nocs {

/// Run description carried in the trace header as `# key=value` lines.
struct TraceMeta {
    MeshDims dims;
    int quantum_cycles = 1000;
    int total_quanta = 0;
    std::uint64_t seed = 0;
    int buffer_depth = 4;
    int packet_length = 8;
    std::string count_unit = "flits";
    std::string workload = "none";
    std::string attacks = "none";
    int attack_count = 0;
    /// Keys this version does not interpret; kept so a read/write cycle is lossless.
    std::vector<std::pair<std::string, std::string>> extra;

    friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

/// Per-quantum, per-router, per-port flit counts plus the ground-truth
/// attack label of every (router, quantum) cell.
class TrafficTrace {
public:
    TrafficTrace() = default;
    explicit TrafficTrace(TraceMeta meta);

    const TraceMeta& meta() const noexcept { return meta_; }
    TraceMeta& meta() noexcept { return meta_; }
    const MeshDims& dims() const noexcept { return meta_.dims; }
    int quanta() const noexcept { return meta_.total_quanta; }

    std::uint32_t count(int quantum, Coordinate router, PortId port, Direction dir) const;
    void set_count(int quantum, Coordinate router, PortId port, Direction dir, std::uint32_t value);

    /// Adds exactly one flit to the addressed cell.
    void record(int quantum, Coordinate router, PortId port, Direction dir);

    bool attacked(int quantum, Coordinate router) const;
    void set_attacked(int quantum, Coordinate router, bool value);
    bool any_attacked() const noexcept;

    /// Drops every quantum at or after `quanta` (used when a run stops early).
    void truncate(int quanta);

    friend bool operator==(const TrafficTrace&, const TrafficTrace&) = default;

private:
    std::size_t cell(int quantum, Coordinate router, PortId port, Direction dir) const;
    std::size_t label_cell(int quantum, Coordinate router) const;

    TraceMeta meta_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint8_t> labels_;
};

struct SeriesOrigin {
    Coordinate router;
    std::string selector;
    int start_quantum = 0;

    friend bool operator==(const SeriesOrigin&, const SeriesOrigin&) = default;
};

struct TimeSeries {
    std::vector<double> samples;
    SeriesOrigin origin;

    std::size_t size() const noexcept { return samples.size(); }
};

namespace selector {
struct AggregateIn {};
struct AggregateOut {};
struct Port {
    PortId port;
    Direction dir;
};
}  // namespace selector

using Selector = std::variant<selector::AggregateIn, selector::AggregateOut, selector::Port>;

std::string selector_name(const Selector& s);

/// One sample per quantum. AggregateIn sums flits_in over the five ports.
TimeSeries extract_series(const TrafficTrace& trace, Coordinate router,
                          const Selector& sel = selector::AggregateIn{});

// Trace CSV: `# key=value` metadata lines, then the header
// `quantum,x,y,port,dir,count` and one row per cell sorted by
// (quantum, y, x, port, dir). Every cell is written, so a truncated file is
// detectable by row count.
void write_trace(const TrafficTrace& trace, std::ostream& out);
void write_trace(const TrafficTrace& trace, const std::filesystem::path& path);

/// Throws ParseError (with a line number) on any malformed input; never
/// returns a partially filled trace.
TrafficTrace read_trace(std::istream& in);
TrafficTrace read_trace(const std::filesystem::path& path);

// Label sidecar: `quantum,x,y,attacked` sorted by (quantum, y, x).
void write_labels(const TrafficTrace& trace, std::ostream& out);
void write_labels(const TrafficTrace& trace, const std::filesystem::path& path);

/// Reads a sidecar into `trace`'s label grid. Dimensions must agree.
void read_labels(std::istream& in, TrafficTrace& trace);
void read_labels(const std::filesystem::path& path, TrafficTrace& trace);

/// Label grid on its own (for evaluation when the trace is not at hand).
struct LabelGrid {
    MeshDims dims;
    int quanta = 0;
    std::vector<std::uint8_t> attacked;  // index: quantum * routers + router

    bool at(int quantum, Coordinate router) const;
};

LabelGrid read_label_grid(std::istream& in);
LabelGrid read_label_grid(const std::filesystem::path& path);
LabelGrid label_grid(const TrafficTrace& trace);

/// `trace.csv` -> `trace.labels.csv`.
std::filesystem::path default_labels_path(const std::filesystem::path& trace_path);

}  // namespace nocs
