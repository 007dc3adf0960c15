#include "nocs/workload.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nocs/rng.hpp"

namespace nocs {

namespace {

void check_common(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    if (dims.width < 1 || dims.height < 1) throw InvalidArgument("mesh dimensions must be positive");
    if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate)) throw InvalidArgument("rate must be a finite value >= 0");
    if (spec.packet_length < 1) throw InvalidArgument("packet_length must be >= 1");
    if (horizon.quantum_cycles < 1 || horizon.quanta < 0) throw InvalidArgument("invalid horizon");
}

void sort_by_cycle(InjectionSchedule& s) {
    std::stable_sort(s.begin(), s.end(), [](const Injection& a, const Injection& b) { return a.cycle < b.cycle; });
}

/// floor(rate) packets plus one more with probability frac(rate).
int packets_this_quantum(Rng& rng, double rate) {
    const double whole = std::floor(rate);
    int n = static_cast<int>(whole);
    if (rng.bernoulli(rate - whole)) ++n;
    return n;
}

std::vector<std::uint64_t> spread_cycles(Rng& rng, int n, int quantum, int quantum_cycles, double spread) {
    const auto window = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(spread * static_cast<double>(quantum_cycles))));
    const std::uint64_t base = static_cast<std::uint64_t>(quantum) * static_cast<std::uint64_t>(quantum_cycles);
    std::vector<std::uint64_t> cycles(static_cast<std::size_t>(n));
    for (auto& c : cycles) c = base + rng.below(window);
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

Coordinate uniform_other(Rng& rng, MeshDims dims, Coordinate self) {
    const int self_index = dims.index(self);
    auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(dims.routers() - 1)));
    if (pick >= self_index) ++pick;
    return dims.at(pick);
}

/// Shared driver: `dest_of` returns nullopt for PEs that stay idle.
template <typename DestFn>
InjectionSchedule random_pattern(MeshDims dims, const PatternSpec& spec, Horizon horizon, DestFn dest_of) {
    InjectionSchedule out;
    for (int i = 0; i < dims.routers(); ++i) {
        const Coordinate src = dims.at(i);
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
        for (int q = 0; q < horizon.quanta; ++q) {
            const int n = packets_this_quantum(rng, spec.rate);
            for (auto cycle : spread_cycles(rng, n, q, horizon.quantum_cycles, 1.0)) {
                auto dest = dest_of(rng, src);
                if (!dest) continue;
                out.push_back({cycle, src, *dest, spec.packet_length, Label::Benign});
            }
        }
    }
    sort_by_cycle(out);
    return out;
}

}  // namespace

std::string_view pattern_name(PatternKind k) noexcept {
    switch (k) {
        case PatternKind::Uniform: return "uniform";
        case PatternKind::Transposed: return "transposed";
        case PatternKind::Hotspot: return "hotspot";
        case PatternKind::PeriodicApp: return "periodic";
    }
    return "?";
}

std::optional<PatternKind> pattern_from_name(std::string_view name) noexcept {
    if (name == "uniform") return PatternKind::Uniform;
    if (name == "transposed") return PatternKind::Transposed;
    if (name == "hotspot") return PatternKind::Hotspot;
    if (name == "periodic") return PatternKind::PeriodicApp;
    return std::nullopt;
}

std::string describe(const PatternSpec& s) {
    std::ostringstream os;
    os << pattern_name(s.kind) << "(rate=" << s.rate << ",len=" << s.packet_length << ",seed=" << s.seed;
    if (s.kind == PatternKind::Hotspot) {
        os << ",hotspot=" << s.hotspot.x << ":" << s.hotspot.y << ",hot_fraction=" << s.hot_fraction;
    }
    if (s.kind == PatternKind::PeriodicApp) {
        os << ",period=" << s.period << ",burst=" << s.burst << ",ramp=" << s.ramp << ",phase_step=" << s.phase_step
           << ",spread=" << s.spread;
    }
    os << ")";
    return os.str();
}

double periodic_intensity(const PatternSpec& s, int phase) {
    const int r = s.ramp;
    const int b = s.burst;
    if (phase < r) return static_cast<double>(phase + 1) / (r + 1);
    if (phase < r + b) return 1.0;
    if (phase < 2 * r + b) return static_cast<double>(2 * r + b - phase) / (r + 1);
    return 0.0;
}

InjectionSchedule gen_uniform(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    check_common(dims, spec, horizon);
    if (dims.routers() < 2) throw InvalidArgument("uniform traffic needs at least two PEs");
    return random_pattern(dims, spec, horizon, [dims](Rng& rng, Coordinate src) -> std::optional<Coordinate> {
        return uniform_other(rng, dims, src);
    });
}

InjectionSchedule gen_transposed(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    check_common(dims, spec, horizon);
    if (dims.width != dims.height) throw InvalidArgument("transposed traffic requires a square mesh");
    return random_pattern(dims, spec, horizon, [](Rng&, Coordinate src) -> std::optional<Coordinate> {
        if (src.x == src.y) return std::nullopt;
        return Coordinate{src.y, src.x};
    });
}

InjectionSchedule gen_hotspot(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    check_common(dims, spec, horizon);
    if (!(spec.hot_fraction >= 0.0 && spec.hot_fraction <= 1.0)) {
        throw InvalidArgument("hot_fraction must lie in [0,1]");
    }
    if (!dims.contains(spec.hotspot)) throw InvalidArgument("hotspot " + to_string(spec.hotspot) + " outside mesh");
    const Coordinate hot = spec.hotspot;
    const double p = spec.hot_fraction;
    return random_pattern(dims, spec, horizon, [=](Rng& rng, Coordinate src) -> std::optional<Coordinate> {
        if (src == hot) return std::nullopt;
        // Always draw both so the stream does not depend on the outcome.
        const bool to_hot = rng.bernoulli(p);
        const Coordinate other = uniform_other(rng, dims, src);
        return to_hot ? hot : other;
    });
}

InjectionSchedule gen_periodic_app(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    check_common(dims, spec, horizon);
    if (spec.period < 1) throw InvalidArgument("period must be >= 1 quantum");
    if (spec.burst < 0 || spec.ramp < 0 || 2 * spec.ramp + spec.burst > spec.period) {
        throw InvalidArgument("burst + 2*ramp must fit in the period");
    }
    if (!(spec.spread > 0.0 && spec.spread <= 1.0)) throw InvalidArgument("spread must lie in (0,1]");
    if (dims.routers() < 2) throw InvalidArgument("periodic traffic needs at least two PEs");

    InjectionSchedule out;
    for (int i = 0; i < dims.routers(); ++i) {
        const Coordinate src = dims.at(i);
        const Coordinate dest{(src.x + dims.width / 2) % dims.width, (src.y + dims.height / 2) % dims.height};
        if (dest == src) continue;
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
        const auto offset = static_cast<long long>(i) * spec.phase_step;
        for (int q = 0; q < horizon.quanta; ++q) {
            auto phase = static_cast<int>(((q + offset) % spec.period + spec.period) % spec.period);
            const int n = static_cast<int>(std::lround(spec.rate * periodic_intensity(spec, phase)));
            for (auto cycle : spread_cycles(rng, n, q, horizon.quantum_cycles, spec.spread)) {
                out.push_back({cycle, src, dest, spec.packet_length, Label::Benign});
            }
        }
    }
    sort_by_cycle(out);
    return out;
}

InjectionSchedule generate(MeshDims dims, const PatternSpec& spec, Horizon horizon) {
    switch (spec.kind) {
        case PatternKind::Uniform: return gen_uniform(dims, spec, horizon);
        case PatternKind::Transposed: return gen_transposed(dims, spec, horizon);
        case PatternKind::Hotspot: return gen_hotspot(dims, spec, horizon);
        case PatternKind::PeriodicApp: return gen_periodic_app(dims, spec, horizon);
    }
    throw InvalidArgument("unknown pattern kind");
}

// ---------------------------------------------------------------------------

std::string_view attack_name(AttackKind k) noexcept {
    switch (k) {
        case AttackKind::Flooding: return "flooding";
        case AttackKind::Misrouting: return "misrouting";
        case AttackKind::DeadlockTamper: return "deadlock";
    }
    return "?";
}

std::optional<AttackKind> attack_from_name(std::string_view name) noexcept {
    if (name == "flooding") return AttackKind::Flooding;
    if (name == "misrouting") return AttackKind::Misrouting;
    if (name == "deadlock") return AttackKind::DeadlockTamper;
    return std::nullopt;
}

std::string describe(const AttackSpec& a) {
    std::ostringstream os;
    os << attack_name(a.kind) << "(q=" << a.start_quantum << ".." << a.end_quantum;
    if (a.kind == AttackKind::Flooding) {
        os << ",attacker=" << a.attacker.x << ":" << a.attacker.y << ",victim=" << a.victim.x << ":" << a.victim.y
           << ",rate=" << a.rate << ",len=" << a.packet_length;
    } else {
        os << ",router=" << a.router.x << ":" << a.router.y;
        if (a.flow_match) {
            os << ",flow=" << a.flow_match->src.x << ":" << a.flow_match->src.y << "->" << a.flow_match->dest.x << ":"
               << a.flow_match->dest.y;
        }
        if (a.invalid_dest) os << ",invalid_dest=" << a.invalid_dest->x << ":" << a.invalid_dest->y;
    }
    os << ")";
    return os.str();
}

std::string describe(std::span<const AttackSpec> specs) {
    if (specs.empty()) return "none";
    std::string out;
    for (const auto& a : specs) {
        if (!out.empty()) out += ";";
        out += describe(a);
    }
    return out;
}

void validate(const AttackSpec& a, MeshDims dims) {
    if (a.start_quantum < 0) throw InvalidArgument("attack start_quantum must be >= 0");
    if (a.start_quantum > a.end_quantum) throw InvalidArgument("attack start_quantum must be <= end_quantum");
    if (a.kind == AttackKind::Flooding) {
        if (!dims.contains(a.attacker)) throw InvalidArgument("attacker " + to_string(a.attacker) + " outside mesh");
        if (!dims.contains(a.victim)) throw InvalidArgument("victim " + to_string(a.victim) + " outside mesh");
        if (a.attacker == a.victim) throw InvalidArgument("attacker and victim must differ");
        if (a.rate < 1) throw InvalidArgument("flooding rate must be >= 1");
        if (a.packet_length < 1) throw InvalidArgument("flooding packet_length must be >= 1");
        return;
    }
    if (!dims.contains(a.router)) throw InvalidArgument("tampered router " + to_string(a.router) + " outside mesh");
    if (a.flow_match && (!dims.contains(a.flow_match->src) || !dims.contains(a.flow_match->dest))) {
        throw InvalidArgument("flow_match endpoints must lie in the mesh");
    }
    if (a.invalid_dest && dims.contains(*a.invalid_dest)) {
        throw InvalidArgument("invalid_dest " + to_string(*a.invalid_dest) + " must lie outside the mesh");
    }
}

InjectionSchedule apply_flooding(const InjectionSchedule& schedule, const AttackSpec& spec, Horizon horizon) {
    if (spec.kind != AttackKind::Flooding) throw InvalidArgument("apply_flooding requires a flooding spec");
    if (spec.attacker == spec.victim) throw InvalidArgument("attacker and victim must differ");
    if (spec.rate < 1) throw InvalidArgument("flooding rate must be >= 1");

    InjectionSchedule out = schedule;
    const int first = std::max(spec.start_quantum, 0);
    const int last = std::min(spec.end_quantum, horizon.quanta - 1);
    if (last < first) return out;

    const auto qc = static_cast<std::uint64_t>(horizon.quantum_cycles);
    const auto rate = static_cast<std::uint64_t>(spec.rate);
    for (int q = first; q <= last; ++q) {
        for (std::uint64_t i = 0; i < rate; ++i) {
            const std::uint64_t cycle = static_cast<std::uint64_t>(q) * qc + i * qc / rate;
            out.push_back({cycle, spec.attacker, spec.victim, spec.packet_length, Label::Attack});
        }
    }
    sort_by_cycle(out);
    return out;
}

RouteOverride compromise_router(MeshDims dims, const AttackSpec& spec, int quantum_cycles) {
    if (spec.kind != AttackKind::Misrouting && spec.kind != AttackKind::DeadlockTamper) {
        throw InvalidArgument("compromise_router: attack kind must be misrouting or deadlock");
    }
    validate(spec, dims);
    RouteOverride ov;
    ov.kind = spec.kind;
    ov.router = spec.router;
    ov.flow_match = spec.flow_match;
    const auto qc = static_cast<std::uint64_t>(quantum_cycles);
    ov.first_cycle = static_cast<std::uint64_t>(spec.start_quantum) * qc;
    ov.last_cycle = (static_cast<std::uint64_t>(spec.end_quantum) + 1) * qc - 1;
    ov.invalid_dest = spec.invalid_dest.value_or(Coordinate{dims.width, spec.router.y});
    return ov;
}

}  // namespace nocs
