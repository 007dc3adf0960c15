#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nocs/monitor.hpp"
#include "nocs/types.hpp"
#include "nocs/workload.hpp"

namespace nocs {

struct MeshConfig {
    int width = 4;
    int height = 4;
    int buffer_depth = 4;
    int packet_length = 8;
    int quantum_cycles = 1000;
    int total_quanta = 100;
    std::uint64_t seed = 1;
    /// Zero-movement cycles before a non-empty network is declared deadlocked.
    std::uint64_t deadlock_window = 500;
    /// Zero-delivery cycles before declaring livelock; 0 selects 10*(w+h)*quantum_cycles.
    std::uint64_t livelock_window = 0;
    bool monitoring = true;

    MeshDims dims() const noexcept { return {width, height}; }
    std::uint64_t total_cycles() const noexcept {
        return static_cast<std::uint64_t>(quantum_cycles) * static_cast<std::uint64_t>(total_quanta);
    }
    std::uint64_t effective_livelock_window() const noexcept;
};

/// Throws ConfigError when an invariant is violated.
void validate(const MeshConfig& config);

enum class FlitKind : std::uint8_t { Header, Body, Tail };

struct Flit {
    FlitKind kind = FlitKind::Header;
    std::uint32_t payload = 0;
    std::uint64_t packet_id = 0;
    Coordinate src;
    Coordinate dest;        // original destination, never rewritten
    Coordinate route_dest;  // what the header is currently routed toward
    int length = 1;
    std::uint64_t inject_cycle = 0;

    bool is_head() const noexcept { return kind == FlitKind::Header; }
    bool is_tail() const noexcept {
        return kind == FlitKind::Tail || (kind == FlitKind::Header && length == 1);
    }
};

struct Reservation {
    PortId input = PortId::Local;
    std::uint64_t packet_id = 0;
    int remaining = 0;
};

struct RouterState {
    Coordinate position;
    std::array<std::deque<Flit>, kPortCount> input_buffers;
    std::array<std::optional<Reservation>, kPortCount> reservations;  // by output port
    std::array<std::optional<PortId>, kPortCount> granted_output;     // by input port
    std::array<std::uint64_t, kPortCount> ages{};                     // by input port

    std::size_t occupancy() const noexcept;
};

/// XY dimension-order routing. Both coordinates must lie in the mesh.
PortId xy_route(MeshDims dims, Coordinate current, Coordinate dest);

/// Unchecked XY step toward an arbitrary (possibly out-of-mesh) address.
PortId xy_direction(Coordinate current, Coordinate dest) noexcept;
/// Unchecked Y-then-X step.
PortId yx_direction(Coordinate current, Coordinate dest) noexcept;

struct ArbitrationRequest {
    PortId input;
    std::uint64_t age;
};

/// Oldest request wins; equal ages go to the lower canonical port.
PortId arbitrate_ttl(std::span<const ArbitrationRequest> requests);

enum class EventKind : std::uint8_t { FlitInjected, FlitMoved, PacketDelivered, PacketDropped };

struct Event {
    EventKind kind;
    std::uint64_t packet_id;
    Coordinate router;
    PortId from;
    PortId to;
};

enum class PacketState : std::uint8_t { Pending, InNetwork, Delivered, Dropped };

struct PacketRecord {
    std::uint64_t id = 0;
    Coordinate src;
    Coordinate dest;
    int length = 0;
    Label label = Label::Benign;
    std::uint64_t release_cycle = 0;
    std::uint64_t finish_cycle = 0;
    int hops = 0;  // inter-router links the header crossed
    int flits_delivered = 0;
    int flits_dropped = 0;
    PacketState state = PacketState::Pending;

    /// Cycles from release to tail ejection, counting both end cycles.
    std::uint64_t latency() const noexcept { return finish_cycle + 1 - release_cycle; }
};

/// What one cycle did, in aggregate (input to stall detection).
struct CycleActivity {
    std::uint64_t flits_moved = 0;  // injections, hops, ejections and drops
    std::uint64_t flits_delivered = 0;
    std::uint64_t flits_dropped = 0;
    std::uint64_t occupancy = 0;    // flits in router buffers after the cycle
};

enum class StallState : std::uint8_t { Progress, Deadlock, Livelock };

std::string_view stall_name(StallState s) noexcept;

/// Deadlock: buffers non-empty and nothing moved for `deadlock_window`
/// consecutive cycles. Livelock: flits keep moving but nothing is delivered
/// or dropped for `livelock_window` consecutive cycles while the network is
/// occupied.
class StallDetector {
public:
    StallDetector(std::uint64_t deadlock_window, std::uint64_t livelock_window);

    StallState observe(const CycleActivity& activity);
    StallState state() const noexcept { return state_; }

private:
    std::uint64_t deadlock_window_;
    std::uint64_t livelock_window_;
    std::uint64_t frozen_ = 0;
    std::uint64_t fruitless_ = 0;
    StallState state_ = StallState::Progress;
};

/// Classifies a cycle history by feeding it through a StallDetector.
StallState detect_stall(std::span<const CycleActivity> history, std::uint64_t deadlock_window,
                        std::uint64_t livelock_window);

/// Cycle-stepped mesh of five-port wormhole routers.
///
/// Per cycle: (1) each PE pushes at most one flit of its oldest pending
/// packet into its router's Local input buffer; (2) every router decides,
/// per output port, which flit crosses it, using buffer occupancy as it
/// stood after step 1; (3) the moves are applied. A flit therefore spends
/// one cycle per router, so a contention-free packet takes
/// (hops + 1) + (length - 1) cycles from release to tail ejection.
class Network {
public:
    explicit Network(const MeshConfig& config, std::vector<RouteOverride> overrides = {});

    /// Queues a packet at its source PE. Returns the packet id.
    std::uint64_t enqueue(const Injection& injection);

    /// Advances one cycle.
    std::vector<Event> step();

    /// Flit counts go to `trace` (may be null). The trace must cover the run.
    void attach_monitor(TrafficTrace* trace) noexcept { monitor_ = trace; }

    std::uint64_t cycle() const noexcept { return cycle_; }
    MeshDims dims() const noexcept { return dims_; }
    const RouterState& router(Coordinate c) const;
    const std::vector<PacketRecord>& packets() const noexcept { return packets_; }
    const CycleActivity& last_activity() const noexcept { return activity_; }

    std::uint64_t flits_in_buffers() const noexcept;
    std::uint64_t flits_pending() const noexcept;
    /// Longest wait of any header at the moment it was granted an output.
    std::uint64_t max_grant_age() const noexcept { return max_grant_age_; }

private:
    struct PendingPacket {
        std::uint64_t id;
        int next_flit;
    };
    struct Move {
        int router;
        PortId input;
        PortId output;
    };

    PortId route_header(int router, Flit& header);
    bool downstream_has_space(int router, PortId output,
                              const std::vector<std::array<std::size_t, kPortCount>>& occupancy) const;
    Flit make_flit(const PacketRecord& packet, int index) const;
    void count(Coordinate router, PortId port, Direction dir);

    MeshConfig config_;
    MeshDims dims_;
    std::vector<RouterState> routers_;
    std::vector<std::deque<PendingPacket>> source_queues_;
    std::vector<RouteOverride> overrides_;
    std::vector<PacketRecord> packets_;
    TrafficTrace* monitor_ = nullptr;
    std::uint64_t cycle_ = 0;
    std::uint64_t max_grant_age_ = 0;
    CycleActivity activity_;
};

enum class SimOutcome : std::uint8_t { Completed, Deadlock, Livelock };

std::string_view outcome_name(SimOutcome o) noexcept;

struct SimStatus {
    SimOutcome outcome = SimOutcome::Completed;
    std::uint64_t cycles_run = 0;
    std::uint64_t packets_injected = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t packets_dropped = 0;

    std::uint64_t packets_in_flight() const noexcept {
        return packets_injected - packets_delivered - packets_dropped;
    }
    friend bool operator==(const SimStatus&, const SimStatus&) = default;
};

/// Flit accounting at the end of each quantum (cumulative since cycle 0).
struct QuantumStats {
    std::uint64_t flits_released = 0;   // entered a PE source queue
    std::uint64_t flits_injected = 0;   // entered a router's Local input buffer
    std::uint64_t flits_delivered = 0;
    std::uint64_t flits_dropped = 0;
    std::uint64_t flits_in_buffers = 0;
    std::uint64_t flits_pending = 0;    // still in source queues
};

struct SimResult {
    TrafficTrace trace;
    SimStatus status;
    std::vector<QuantumStats> quanta;
    std::vector<PacketRecord> packets;
};

/// Applies the flooding specs to `schedule`, installs the tamper specs as
/// route overrides, labels attacked (router, quantum) cells and runs for
/// total_quanta * quantum_cycles cycles or until a stall is detected. The
/// trace then ends with the quantum in which the run stopped.
SimResult run_simulation(const MeshConfig& config, const InjectionSchedule& schedule,
                         std::span<const AttackSpec> attacks = {},
                         const std::string& workload_description = "custom");

}  // namespace nocs
