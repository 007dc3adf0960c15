#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nocs/types.hpp"

namespace nocs {

struct Injection {
    std::uint64_t cycle = 0;
    Coordinate src;
    Coordinate dest;
    int length = 8;
    Label label = Label::Benign;

    friend bool operator==(const Injection&, const Injection&) = default;
};

/// Ordered by cycle (non-decreasing); entries with equal cycles keep insertion order.
using InjectionSchedule = std::vector<Injection>;

/// Time extent a generator fills.
struct Horizon {
    int quantum_cycles = 1000;
    int quanta = 0;

    constexpr std::uint64_t cycles() const noexcept {
        return static_cast<std::uint64_t>(quantum_cycles) * static_cast<std::uint64_t>(quanta);
    }
};

enum class PatternKind { Uniform, Transposed, Hotspot, PeriodicApp };

std::string_view pattern_name(PatternKind k) noexcept;
std::optional<PatternKind> pattern_from_name(std::string_view name) noexcept;

struct PatternSpec {
    PatternKind kind = PatternKind::Uniform;
    /// Packets per PE per quantum. For PeriodicApp this is the peak (burst) rate.
    double rate = 1.0;
    int packet_length = 8;
    std::uint64_t seed = 1;

    // Hotspot
    Coordinate hotspot{0, 0};
    double hot_fraction = 0.5;

    // PeriodicApp: every period is ramp-up, burst, ramp-down, then quiet.
    int period = 8;
    int burst = 2;
    int ramp = 2;
    /// PE with router index i runs `i * phase_step` quanta ahead in its period.
    int phase_step = 1;
    /// Fraction of each quantum over which a PE's injections are spread.
    double spread = 0.5;
};

/// Human-readable one-line description, stored in trace metadata.
std::string describe(const PatternSpec& spec);

/// Intensity in [0,1] of a periodic-app PE at position `phase` of its period.
double periodic_intensity(const PatternSpec& spec, int phase);

InjectionSchedule gen_uniform(MeshDims dims, const PatternSpec& spec, Horizon horizon);
/// PE(x,y) sends only to PE(y,x); diagonal PEs stay idle. Requires a square mesh.
InjectionSchedule gen_transposed(MeshDims dims, const PatternSpec& spec, Horizon horizon);
/// The hotspot PE itself does not inject.
InjectionSchedule gen_hotspot(MeshDims dims, const PatternSpec& spec, Horizon horizon);
/// Each PE talks to a fixed partner (half a mesh away in both axes) with a
/// repeating quiet/ramp/burst profile, so per-router counts are periodic.
InjectionSchedule gen_periodic_app(MeshDims dims, const PatternSpec& spec, Horizon horizon);

/// Dispatches on spec.kind.
InjectionSchedule generate(MeshDims dims, const PatternSpec& spec, Horizon horizon);

enum class AttackKind { Flooding, Misrouting, DeadlockTamper };

std::string_view attack_name(AttackKind k) noexcept;
std::optional<AttackKind> attack_from_name(std::string_view name) noexcept;

struct FlowMatch {
    Coordinate src;
    Coordinate dest;

    friend bool operator==(FlowMatch, FlowMatch) = default;
};

struct AttackSpec {
    AttackKind kind = AttackKind::Flooding;
    int start_quantum = 0;
    int end_quantum = 0;  // inclusive

    // Flooding
    Coordinate attacker;
    Coordinate victim;
    int rate = 1;          // packets per quantum
    int packet_length = 8;

    // Misrouting / DeadlockTamper
    Coordinate router;
    std::optional<FlowMatch> flow_match;  // unset: every flow through the router
    /// Misrouting target; unset means one column east of the mesh on the tampered router's row.
    std::optional<Coordinate> invalid_dest;
};

std::string describe(const AttackSpec& spec);
std::string describe(std::span<const AttackSpec> specs);

/// Appends `rate` attacker->victim packets per quantum in [start, end]
/// (clamped to the horizon), evenly spaced within each quantum, labelled Attack.
InjectionSchedule apply_flooding(const InjectionSchedule& schedule, const AttackSpec& spec,
                                 Horizon horizon);

/// Router-level tamper installed by a compromised router.
struct RouteOverride {
    AttackKind kind = AttackKind::Misrouting;
    Coordinate router;
    std::optional<FlowMatch> flow_match;
    std::uint64_t first_cycle = 0;
    std::uint64_t last_cycle = 0;  // inclusive
    Coordinate invalid_dest;

    bool active(std::uint64_t cycle) const noexcept {
        return cycle >= first_cycle && cycle <= last_cycle;
    }
    /// Matches against the packet's original source and destination.
    bool matches(Coordinate src, Coordinate original_dest) const noexcept {
        return !flow_match || (flow_match->src == src && flow_match->dest == original_dest);
    }
};

RouteOverride compromise_router(MeshDims dims, const AttackSpec& spec, int quantum_cycles);

/// Validates coordinates and intervals; throws InvalidArgument.
void validate(const AttackSpec& spec, MeshDims dims);

}  // namespace nocs
