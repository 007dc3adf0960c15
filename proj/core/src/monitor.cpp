#include "nocs/monitor.hpp"

#include <algorithm>

namespace nocs {

TrafficTrace::TrafficTrace(TraceMeta meta) : meta_(std::move(meta)) {
    if (meta_.dims.width < 1 || meta_.dims.height < 1) throw InvalidArgument("trace dimensions must be positive");
    if (meta_.total_quanta < 0) throw InvalidArgument("trace quanta must be >= 0");
    const auto q = static_cast<std::size_t>(meta_.total_quanta);
    const auto r = static_cast<std::size_t>(meta_.dims.routers());
    counts_.assign(q * r * kPortCount * 2, 0);
    labels_.assign(q * r, 0);
}

std::size_t TrafficTrace::cell(int quantum, Coordinate router, PortId port, Direction dir) const {
    if (quantum < 0 || quantum >= meta_.total_quanta) {
        throw InvalidArgument("quantum " + std::to_string(quantum) + " outside trace");
    }
    if (!meta_.dims.contains(router)) throw InvalidArgument("router " + to_string(router) + " outside mesh");
    const auto base = static_cast<std::size_t>(quantum) * static_cast<std::size_t>(meta_.dims.routers()) +
                      static_cast<std::size_t>(meta_.dims.index(router));
    return (base * kPortCount + port_index(port)) * 2 + static_cast<std::size_t>(dir);
}

std::size_t TrafficTrace::label_cell(int quantum, Coordinate router) const {
    if (quantum < 0 || quantum >= meta_.total_quanta) {
        throw InvalidArgument("quantum " + std::to_string(quantum) + " outside trace");
    }
    if (!meta_.dims.contains(router)) throw InvalidArgument("router " + to_string(router) + " outside mesh");
    return static_cast<std::size_t>(quantum) * static_cast<std::size_t>(meta_.dims.routers()) +
           static_cast<std::size_t>(meta_.dims.index(router));
}

std::uint32_t TrafficTrace::count(int quantum, Coordinate router, PortId port, Direction dir) const {
    return counts_[cell(quantum, router, port, dir)];
}

void TrafficTrace::set_count(int quantum, Coordinate router, PortId port, Direction dir, std::uint32_t value) {
    counts_[cell(quantum, router, port, dir)] = value;
}

void TrafficTrace::record(int quantum, Coordinate router, PortId port, Direction dir) {
    ++counts_[cell(quantum, router, port, dir)];
}

bool TrafficTrace::attacked(int quantum, Coordinate router) const { return labels_[label_cell(quantum, router)] != 0; }

void TrafficTrace::set_attacked(int quantum, Coordinate router, bool value) {
    labels_[label_cell(quantum, router)] = value ? 1 : 0;
}

bool TrafficTrace::any_attacked() const noexcept {
    return std::any_of(labels_.begin(), labels_.end(), [](std::uint8_t v) { return v != 0; });
}

void TrafficTrace::truncate(int quanta) {
    if (quanta < 0 || quanta >= meta_.total_quanta) return;
    meta_.total_quanta = quanta;
    const auto r = static_cast<std::size_t>(meta_.dims.routers());
    counts_.resize(static_cast<std::size_t>(quanta) * r * kPortCount * 2);
    labels_.resize(static_cast<std::size_t>(quanta) * r);
}

std::string selector_name(const Selector& s) {
    if (std::holds_alternative<selector::AggregateIn>(s)) return "aggregate_in";
    if (std::holds_alternative<selector::AggregateOut>(s)) return "aggregate_out";
    const auto& p = std::get<selector::Port>(s);
    return std::string("port_") + port_letter(p.port) + (p.dir == Direction::In ? "_in" : "_out");
}

TimeSeries extract_series(const TrafficTrace& trace, Coordinate router, const Selector& sel) {
    if (!trace.dims().contains(router)) throw InvalidArgument("router " + to_string(router) + " outside mesh");
    TimeSeries ts;
    ts.origin = {router, selector_name(sel), 0};
    ts.samples.reserve(static_cast<std::size_t>(trace.quanta()));
    for (int q = 0; q < trace.quanta(); ++q) {
        double v = 0.0;
        if (const auto* p = std::get_if<selector::Port>(&sel)) {
            v = trace.count(q, router, p->port, p->dir);
        } else {
            const Direction d = std::holds_alternative<selector::AggregateIn>(sel) ? Direction::In : Direction::Out;
            for (PortId port : kAllPorts) v += trace.count(q, router, port, d);
        }
        ts.samples.push_back(v);
    }
    return ts;
}

bool LabelGrid::at(int quantum, Coordinate router) const {
    if (quantum < 0 || quantum >= quanta || !dims.contains(router)) {
        throw InvalidArgument("no label for quantum " + std::to_string(quantum) + " at " + to_string(router));
    }
    return attacked[static_cast<std::size_t>(quantum) * static_cast<std::size_t>(dims.routers()) +
                    static_cast<std::size_t>(dims.index(router))] != 0;
}

LabelGrid label_grid(const TrafficTrace& trace) {
    LabelGrid g;
    g.dims = trace.dims();
    g.quanta = trace.quanta();
    g.attacked.reserve(static_cast<std::size_t>(g.quanta) * static_cast<std::size_t>(g.dims.routers()));
    for (int q = 0; q < g.quanta; ++q) {
        for (int r = 0; r < g.dims.routers(); ++r) g.attacked.push_back(trace.attacked(q, g.dims.at(r)) ? 1 : 0);
    }
    return g;
}

}  // namespace nocs
