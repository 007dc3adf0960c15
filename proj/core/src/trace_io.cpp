#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "nocs/monitor.hpp"
#include "text_util.hpp"

namespace nocs {

namespace {

constexpr std::string_view kTraceHeader = "quantum,x,y,port,dir,count";
constexpr std::string_view kLabelHeader = "quantum,x,y,attacked";
constexpr std::string_view kTraceFormat = "nocs-trace-1";

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    return in;
}

template <typename Int>
Int require_int(const std::string& key, const std::string& value, std::size_t line) {
    auto v = detail::parse_int<Int>(value);
    if (!v) throw ParseError(line, "metadata '" + key + "' is not an integer: " + value);
    return *v;
}

}  // namespace

void write_trace(const TrafficTrace& trace, std::ostream& out) {
    const auto& m = trace.meta();
    out << "# format=" << kTraceFormat << '\n'
        << "# width=" << m.dims.width << '\n'
        << "# height=" << m.dims.height << '\n'
        << "# quantum_cycles=" << m.quantum_cycles << '\n'
        << "# total_quanta=" << m.total_quanta << '\n'
        << "# seed=" << m.seed << '\n'
        << "# buffer_depth=" << m.buffer_depth << '\n'
        << "# packet_length=" << m.packet_length << '\n'
        << "# count_unit=" << m.count_unit << '\n'
        << "# workload=" << m.workload << '\n'
        << "# attacks=" << m.attacks << '\n'
        << "# attack_count=" << m.attack_count << '\n';
    for (const auto& [k, v] : m.extra) out << "# " << k << '=' << v << '\n';
    out << kTraceHeader << '\n';

    std::string row;
    for (int q = 0; q < m.total_quanta; ++q) {
        for (int y = 0; y < m.dims.height; ++y) {
            for (int x = 0; x < m.dims.width; ++x) {
                for (PortId p : kAllPorts) {
                    for (Direction d : {Direction::In, Direction::Out}) {
                        row.clear();
                        row += std::to_string(q);
                        row += ',';
                        row += std::to_string(x);
                        row += ',';
                        row += std::to_string(y);
                        row += ',';
                        row += port_letter(p);
                        row += d == Direction::In ? ",in," : ",out,";
                        row += std::to_string(trace.count(q, {x, y}, p, d));
                        row += '\n';
                        out << row;
                    }
                }
            }
        }
    }
}

void write_trace(const TrafficTrace& trace, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_trace(trace, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

TrafficTrace read_trace(std::istream& in) {
    detail::LineReader reader(in);
    std::string line;
    TraceMeta meta;
    bool have_w = false, have_h = false, have_q = false, have_qc = false;

    bool header_seen = false;
    while (reader.next(line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto kv = detail::parse_meta_line(line);
            if (!kv) throw ParseError(reader.line_no(), "malformed metadata line");
            const auto& [k, v] = *kv;
            const auto n = reader.line_no();
            if (k == "format") {
                if (v != kTraceFormat) throw ParseError(n, "unsupported trace format " + v);
            } else if (k == "width") {
                meta.dims.width = require_int<int>(k, v, n);
                have_w = true;
            } else if (k == "height") {
                meta.dims.height = require_int<int>(k, v, n);
                have_h = true;
            } else if (k == "quantum_cycles") {
                meta.quantum_cycles = require_int<int>(k, v, n);
                have_qc = true;
            } else if (k == "total_quanta") {
                meta.total_quanta = require_int<int>(k, v, n);
                have_q = true;
            } else if (k == "seed") {
                meta.seed = require_int<std::uint64_t>(k, v, n);
            } else if (k == "buffer_depth") {
                meta.buffer_depth = require_int<int>(k, v, n);
            } else if (k == "packet_length") {
                meta.packet_length = require_int<int>(k, v, n);
            } else if (k == "count_unit") {
                meta.count_unit = v;
            } else if (k == "workload") {
                meta.workload = v;
            } else if (k == "attacks") {
                meta.attacks = v;
            } else if (k == "attack_count") {
                meta.attack_count = require_int<int>(k, v, n);
            } else {
                meta.extra.emplace_back(k, v);
            }
            continue;
        }
        if (detail::trim(line) != kTraceHeader) {
            throw ParseError(reader.line_no(), "expected header '" + std::string(kTraceHeader) + "'");
        }
        header_seen = true;
        break;
    }
    if (!header_seen) throw ParseError(reader.line_no(), "missing trace header");
    if (!have_w || !have_h || !have_q || !have_qc) {
        throw ParseError(reader.line_no(), "metadata must define width, height, quantum_cycles and total_quanta");
    }
    if (meta.dims.width < 1 || meta.dims.height < 1 || meta.total_quanta < 0 || meta.quantum_cycles < 1) {
        throw ParseError(reader.line_no(), "metadata values out of range");
    }

    TrafficTrace trace(meta);
    const std::size_t expected = static_cast<std::size_t>(meta.total_quanta) *
                                 static_cast<std::size_t>(meta.dims.routers()) * kPortCount * 2;
    std::size_t seen = 0;
    while (reader.next(line)) {
        if (detail::trim(line).empty()) continue;
        const auto n = reader.line_no();
        if (seen == expected) throw ParseError(n, "unexpected row after the last cell");
        const auto f = detail::split(line, ',');
        if (f.size() != 6) throw ParseError(n, "expected 6 fields");

        // Expected cell for this row position.
        std::size_t idx = seen;
        const auto dir_i = idx % 2;
        idx /= 2;
        const auto port_i = idx % kPortCount;
        idx /= kPortCount;
        const auto router_i = static_cast<int>(idx % static_cast<std::size_t>(meta.dims.routers()));
        const auto quantum = static_cast<int>(idx / static_cast<std::size_t>(meta.dims.routers()));
        const Coordinate rc = meta.dims.at(router_i);

        const auto q = detail::parse_int<int>(f[0]);
        const auto x = detail::parse_int<int>(f[1]);
        const auto y = detail::parse_int<int>(f[2]);
        const auto port_s = detail::trim(f[3]);
        const auto dir_s = detail::trim(f[4]);
        const auto count_s = detail::trim(f[5]);
        if (!q || !x || !y) throw ParseError(n, "non-integer coordinate field");
        if (port_s.size() != 1 || !port_from_letter(port_s[0])) throw ParseError(n, "bad port field");
        if (dir_s != "in" && dir_s != "out") throw ParseError(n, "bad dir field");
        if (!count_s.empty() && count_s.front() == '-') throw ParseError(n, "negative count");
        const auto cnt = detail::parse_int<std::uint32_t>(count_s);
        if (!cnt) throw ParseError(n, "bad count field");
        const PortId port = *port_from_letter(port_s[0]);
        const Direction dir = dir_s == "in" ? Direction::In : Direction::Out;

        if (*q != quantum || *x != rc.x || *y != rc.y || port_index(port) != port_i ||
            static_cast<std::size_t>(dir) != dir_i) {
            throw ParseError(n, "row out of order or outside the mesh");
        }
        if (*cnt > static_cast<std::uint32_t>(meta.quantum_cycles)) {
            throw ParseError(n, "count exceeds quantum_cycles");
        }
        trace.set_count(quantum, rc, port, dir, *cnt);
        ++seen;
    }
    if (seen != expected) {
        throw ParseError(reader.line_no(), "truncated trace: expected " + std::to_string(expected) + " rows, got " +
                                               std::to_string(seen));
    }
    return trace;
}

TrafficTrace read_trace(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_trace(in);
}

void write_labels(const TrafficTrace& trace, std::ostream& out) {
    out << kLabelHeader << '\n';
    for (int q = 0; q < trace.quanta(); ++q) {
        for (int y = 0; y < trace.dims().height; ++y) {
            for (int x = 0; x < trace.dims().width; ++x) {
                out << q << ',' << x << ',' << y << ',' << (trace.attacked(q, {x, y}) ? 1 : 0) << '\n';
            }
        }
    }
}

void write_labels(const TrafficTrace& trace, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_labels(trace, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

struct LabelRow {
    int quantum, x, y;
    bool attacked;
};

std::vector<LabelRow> parse_label_rows(std::istream& in, std::size_t& last_line) {
    detail::LineReader reader(in);
    std::string line;
    bool header = false;
    std::vector<LabelRow> rows;
    while (reader.next(line)) {
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header) {
            if (t != kLabelHeader) throw ParseError(reader.line_no(), "expected header '" + std::string(kLabelHeader) + "'");
            header = true;
            continue;
        }
        const auto f = detail::split(t, ',');
        if (f.size() != 4) throw ParseError(reader.line_no(), "expected 4 fields");
        const auto q = detail::parse_int<int>(f[0]);
        const auto x = detail::parse_int<int>(f[1]);
        const auto y = detail::parse_int<int>(f[2]);
        const auto a = detail::parse_int<int>(f[3]);
        if (!q || !x || !y || !a || *q < 0 || *x < 0 || *y < 0) throw ParseError(reader.line_no(), "bad label row");
        if (*a != 0 && *a != 1) throw ParseError(reader.line_no(), "attacked must be 0 or 1");
        rows.push_back({*q, *x, *y, *a == 1});
    }
    if (!header) throw ParseError(reader.line_no(), "missing label header");
    last_line = reader.line_no();
    return rows;
}

}  // namespace

void read_labels(std::istream& in, TrafficTrace& trace) {
    std::size_t last_line = 0;
    const auto rows = parse_label_rows(in, last_line);
    const auto routers = static_cast<std::size_t>(trace.dims().routers());
    const std::size_t expected = static_cast<std::size_t>(trace.quanta()) * routers;
    if (rows.size() != expected) {
        throw ParseError(last_line, "label file has " + std::to_string(rows.size()) + " rows, trace needs " +
                                        std::to_string(expected));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const Coordinate c = trace.dims().at(static_cast<int>(i % routers));
        if (r.quantum != static_cast<int>(i / routers) || r.x != c.x || r.y != c.y) {
            throw ParseError(0, "label rows out of order at row " + std::to_string(i + 1));
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) trace.set_attacked(rows[i].quantum, {rows[i].x, rows[i].y}, rows[i].attacked);
}

void read_labels(const std::filesystem::path& path, TrafficTrace& trace) {
    auto in = open_in(path);
    read_labels(in, trace);
}

LabelGrid read_label_grid(std::istream& in) {
    std::size_t last_line = 0;
    const auto rows = parse_label_rows(in, last_line);
    if (rows.empty()) throw ParseError(last_line, "label file has no rows");
    LabelGrid g;
    int max_x = 0, max_y = 0, max_q = 0;
    for (const auto& r : rows) {
        max_x = std::max(max_x, r.x);
        max_y = std::max(max_y, r.y);
        max_q = std::max(max_q, r.quantum);
    }
    g.dims = {max_x + 1, max_y + 1};
    g.quanta = max_q + 1;
    const auto routers = static_cast<std::size_t>(g.dims.routers());
    if (rows.size() != static_cast<std::size_t>(g.quanta) * routers) {
        throw ParseError(last_line, "label file is not a complete (quantum, router) grid");
    }
    g.attacked.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const Coordinate c = g.dims.at(static_cast<int>(i % routers));
        if (r.quantum != static_cast<int>(i / routers) || r.x != c.x || r.y != c.y) {
            throw ParseError(0, "label rows out of order at row " + std::to_string(i + 1));
        }
        g.attacked[i] = r.attacked ? 1 : 0;
    }
    return g;
}

LabelGrid read_label_grid(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_label_grid(in);
}

std::filesystem::path default_labels_path(const std::filesystem::path& trace_path) {
    auto p = trace_path;
    p.replace_extension(".labels.csv");
    return p;
}

}  // namespace nocs
