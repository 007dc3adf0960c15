#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

namespace nocs::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T number(std::string_view v, std::size_t line, const std::string& key) {
    T out{};
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (v.empty() || ec != std::errc{} || ptr != end) fail(line, "'" + key + "' expects a number, got '" + std::string(v) + "'");
    return out;
}

Coordinate coordinate(std::string_view v, std::size_t line, const std::string& key) {
    const auto comma = v.find(',');
    if (comma == std::string_view::npos) fail(line, "'" + key + "' expects x,y");
    return {number<int>(trim(v.substr(0, comma)), line, key), number<int>(trim(v.substr(comma + 1)), line, key)};
}

template <typename F>
auto rethrow_with_line(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        fail(line, e.what());
    }
}

using Setter = std::function<void(RunConfig&, std::string_view, std::size_t)>;

template <typename T>
Setter positive(T MeshConfig::*field, const std::string& key) {
    return [field, key](RunConfig& c, std::string_view v, std::size_t line) {
        const auto n = number<T>(v, line, key);
        if (n < 1) fail(line, "'" + key + "' must be >= 1");
        c.mesh.*field = n;
    };
}

const std::map<std::string, Setter>& mesh_keys() {
    static const std::map<std::string, Setter> keys{
        {"width", positive(&MeshConfig::width, "width")},
        {"height", positive(&MeshConfig::height, "height")},
        {"buffer_depth", positive(&MeshConfig::buffer_depth, "buffer_depth")},
        {"packet_length", positive(&MeshConfig::packet_length, "packet_length")},
        {"quantum_cycles", positive(&MeshConfig::quantum_cycles, "quantum_cycles")},
        {"total_quanta", positive(&MeshConfig::total_quanta, "total_quanta")},
        {"deadlock_window", positive(&MeshConfig::deadlock_window, "deadlock_window")},
        {"livelock_window",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.mesh.livelock_window = number<std::uint64_t>(v, l, "livelock_window");
         }},
        {"seed",
         [](RunConfig& c, std::string_view v, std::size_t l) { c.mesh.seed = number<std::uint64_t>(v, l, "seed"); }},
    };
    return keys;
}

const std::map<std::string, Setter>& traffic_keys() {
    static const std::map<std::string, Setter> keys{
        {"pattern",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             auto kind = pattern_from_name(v);
             if (!kind) fail(l, "unknown pattern '" + std::string(v) + "'");
             c.traffic.kind = *kind;
         }},
        {"rate",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.traffic.rate = number<double>(v, l, "rate");
             if (!(c.traffic.rate >= 0.0)) fail(l, "'rate' must be >= 0");
         }},
        {"hotspot",
         [](RunConfig& c, std::string_view v, std::size_t l) { c.traffic.hotspot = coordinate(v, l, "hotspot"); }},
        {"hot_fraction",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.traffic.hot_fraction = number<double>(v, l, "hot_fraction");
             if (!(c.traffic.hot_fraction >= 0.0 && c.traffic.hot_fraction <= 1.0)) {
                 fail(l, "'hot_fraction' must be in [0,1]");
             }
         }},
        {"period", [](RunConfig& c, std::string_view v, std::size_t l) { c.traffic.period = number<int>(v, l, "period"); }},
        {"burst", [](RunConfig& c, std::string_view v, std::size_t l) { c.traffic.burst = number<int>(v, l, "burst"); }},
        {"ramp", [](RunConfig& c, std::string_view v, std::size_t l) { c.traffic.ramp = number<int>(v, l, "ramp"); }},
        {"phase_step",
         [](RunConfig& c, std::string_view v, std::size_t l) { c.traffic.phase_step = number<int>(v, l, "phase_step"); }},
        {"spread",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.traffic.spread = number<double>(v, l, "spread");
             if (!(c.traffic.spread > 0.0 && c.traffic.spread <= 1.0)) fail(l, "'spread' must be in (0,1]");
         }},
    };
    return keys;
}

AttackSpec& current_attack(RunConfig& c) { return c.attacks.back(); }

const std::map<std::string, Setter>& attack_keys() {
    static const std::map<std::string, Setter> keys{
        {"kind",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             auto kind = attack_from_name(v);
             if (!kind) fail(l, "unknown attack kind '" + std::string(v) + "'");
             current_attack(c).kind = *kind;
         }},
        {"start",
         [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).start_quantum = number<int>(v, l, "start"); }},
        {"end",
         [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).end_quantum = number<int>(v, l, "end"); }},
        {"attacker",
         [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).attacker = coordinate(v, l, "attacker"); }},
        {"victim",
         [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).victim = coordinate(v, l, "victim"); }},
        {"rate", [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).rate = number<int>(v, l, "rate"); }},
        {"packet_length",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             current_attack(c).packet_length = number<int>(v, l, "packet_length");
         }},
        {"router",
         [](RunConfig& c, std::string_view v, std::size_t l) { current_attack(c).router = coordinate(v, l, "router"); }},
        {"flow_src",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             auto& a = current_attack(c);
             if (!a.flow_match) a.flow_match = FlowMatch{};
             a.flow_match->src = coordinate(v, l, "flow_src");
         }},
        {"flow_dest",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             auto& a = current_attack(c);
             if (!a.flow_match) a.flow_match = FlowMatch{};
             a.flow_match->dest = coordinate(v, l, "flow_dest");
         }},
        {"invalid_dest",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             current_attack(c).invalid_dest = coordinate(v, l, "invalid_dest");
         }},
    };
    return keys;
}

const std::map<std::string, Setter>& ids_keys() {
    static const std::map<std::string, Setter> keys{
        {"w", [](RunConfig& c, std::string_view v, std::size_t l) { c.ids.window.width = number<int>(v, l, "w"); }},
        {"s", [](RunConfig& c, std::string_view v, std::size_t l) { c.ids.window.stride = number<int>(v, l, "s"); }},
        {"k", [](RunConfig& c, std::string_view v, std::size_t l) { c.ids.k = number<int>(v, l, "k"); }},
        {"metric",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.metric = rethrow_with_line(l, [&] { return Metric::parse(std::string(v)); });
         }},
        {"algorithm",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.algorithm = rethrow_with_line(l, [&] { return parse_algorithm(std::string(v)); });
         }},
        {"linkage",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.linkage = rethrow_with_line(l, [&] { return parse_linkage(std::string(v)); });
         }},
        {"normalization",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.window.normalization = rethrow_with_line(l, [&] { return parse_normalization(std::string(v)); });
         }},
        {"percentile",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.percentile = number<double>(v, l, "percentile");
             if (!(c.ids.percentile > 0.0 && c.ids.percentile <= 100.0)) fail(l, "'percentile' must be in (0,100]");
         }},
        {"floor",
         [](RunConfig& c, std::string_view v, std::size_t l) {
             c.ids.floor = number<double>(v, l, "floor");
             if (!(c.ids.floor >= 0.0)) fail(l, "'floor' must be >= 0");
         }},
        {"seed", [](RunConfig& c, std::string_view v, std::size_t l) { c.ids.seed = number<std::uint64_t>(v, l, "seed"); }},
    };
    return keys;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    const std::map<std::string, Setter>* section = nullptr;
    std::string section_name;
    std::map<std::string, std::size_t> seen_sections;
    std::map<std::string, std::size_t> seen_keys;
    std::vector<std::size_t> attack_lines;
    std::size_t line_no = 0;
    std::string raw;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            section_name = std::string(trim(line.substr(1, line.size() - 2)));
            if (section_name == "mesh") {
                section = &mesh_keys();
            } else if (section_name == "traffic") {
                section = &traffic_keys();
            } else if (section_name == "ids") {
                section = &ids_keys();
            } else if (section_name == "attack") {
                section = &attack_keys();
                cfg.attacks.emplace_back();
                attack_lines.push_back(line_no);
            } else {
                fail(line_no, "unknown section [" + section_name + "]");
            }
            if (section_name != "attack" && seen_sections.count(section_name)) {
                fail(line_no, "section [" + section_name + "] repeated");
            }
            seen_sections[section_name] = line_no;
            seen_keys.clear();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (!section) fail(line_no, "'" + key + "' appears before any [section]");
        const auto it = section->find(key);
        if (it == section->end()) fail(line_no, "unknown key '" + key + "' in [" + section_name + "]");
        if (seen_keys.count(key)) fail(line_no, "'" + key + "' set twice in [" + section_name + "]");
        seen_keys[key] = line_no;
        it->second(cfg, value, line_no);
    }

    cfg.traffic.packet_length = cfg.mesh.packet_length;
    cfg.traffic.seed = cfg.mesh.seed;
    try {
        validate(cfg.mesh);
    } catch (const ConfigError& e) {
        const auto at = seen_sections.count("mesh") ? seen_sections["mesh"] : 0;
        fail(at, std::string("[mesh] ") + e.what());
    }
    for (std::size_t i = 0; i < cfg.attacks.size(); ++i) {
        rethrow_with_line(attack_lines[i], [&] {
            validate(cfg.attacks[i], cfg.mesh.dims());
            return 0;
        });
    }
    if (cfg.traffic.kind == PatternKind::Hotspot && !cfg.mesh.dims().contains(cfg.traffic.hotspot)) {
        fail(seen_sections.count("traffic") ? seen_sections["traffic"] : 0, "hotspot outside the mesh");
    }
    if (cfg.traffic.kind == PatternKind::Transposed && cfg.mesh.width != cfg.mesh.height) {
        fail(seen_sections.count("traffic") ? seen_sections["traffic"] : 0, "transposed traffic needs a square mesh");
    }
    rethrow_with_line(seen_sections.count("ids") ? seen_sections["ids"] : 0, [&] {
        cfg.ids.window.validate();
        if (cfg.ids.k < 1) throw InvalidArgument("'k' must be >= 1");
        return 0;
    });
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in);
}

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("NOC_SENTINEL_SEED");
    if (!raw || !*raw) return std::nullopt;
    std::string_view v(raw);
    std::uint64_t seed{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("NOC_SENTINEL_SEED is not an unsigned integer: '" + std::string(v) + "'");
    }
    return seed;
}

}  // namespace nocs::cli
