#include "nocs/noc.hpp"

#include <algorithm>

namespace nocs {

std::uint64_t MeshConfig::effective_livelock_window() const noexcept {
    if (livelock_window != 0) return livelock_window;
    return 10ULL * static_cast<std::uint64_t>(width + height) *
           static_cast<std::uint64_t>(quantum_cycles);
}

void validate(const MeshConfig& c) {
    if (c.width < 1 || c.height < 1) throw ConfigError("mesh width and height must be positive");
    if (c.width * c.height < 2) throw ConfigError("mesh must contain at least two routers");
    if (c.buffer_depth < 2) throw ConfigError("buffer_depth must be at least 2");
    if (c.packet_length < 1) throw ConfigError("packet_length must be at least 1");
    if (c.quantum_cycles < 1) throw ConfigError("quantum_cycles must be at least 1");
    if (c.total_quanta < 1) throw ConfigError("total_quanta must be at least 1");
    if (c.deadlock_window < 1) throw ConfigError("deadlock_window must be at least 1");
}

std::size_t RouterState::occupancy() const noexcept {
    std::size_t n = 0;
    for (const auto& b : input_buffers) n += b.size();
    return n;
}

PortId xy_direction(Coordinate current, Coordinate dest) noexcept {
    if (current.x < dest.x) return PortId::East;
    if (current.x > dest.x) return PortId::West;
    if (current.y < dest.y) return PortId::North;
    if (current.y > dest.y) return PortId::South;
    return PortId::Local;
}

PortId yx_direction(Coordinate current, Coordinate dest) noexcept {
    if (current.y < dest.y) return PortId::North;
    if (current.y > dest.y) return PortId::South;
    if (current.x < dest.x) return PortId::East;
    if (current.x > dest.x) return PortId::West;
    return PortId::Local;
}

PortId xy_route(MeshDims dims, Coordinate current, Coordinate dest) {
    if (!dims.contains(current)) throw InvalidArgument("xy_route: current " + to_string(current) + " outside mesh");
    if (!dims.contains(dest)) throw InvalidArgument("xy_route: dest " + to_string(dest) + " outside mesh");
    return xy_direction(current, dest);
}

PortId arbitrate_ttl(std::span<const ArbitrationRequest> requests) {
    if (requests.empty()) throw InvalidArgument("arbitrate_ttl: no requests");
    const ArbitrationRequest* best = &requests.front();
    for (const auto& r : requests.subspan(1)) {
        if (r.age > best->age || (r.age == best->age && port_index(r.input) < port_index(best->input))) {
            best = &r;
        }
    }
    return best->input;
}

std::string_view stall_name(StallState s) noexcept {
    switch (s) {
        case StallState::Progress: return "Progress";
        case StallState::Deadlock: return "Deadlock";
        case StallState::Livelock: return "Livelock";
    }
    return "?";
}

std::string_view outcome_name(SimOutcome o) noexcept {
    switch (o) {
        case SimOutcome::Completed: return "Completed";
        case SimOutcome::Deadlock: return "Deadlock";
        case SimOutcome::Livelock: return "Livelock";
    }
    return "?";
}

StallDetector::StallDetector(std::uint64_t deadlock_window, std::uint64_t livelock_window)
    : deadlock_window_(deadlock_window), livelock_window_(livelock_window) {
    if (deadlock_window_ < 1) throw InvalidArgument("deadlock window must be >= 1");
    if (livelock_window_ < 1) throw InvalidArgument("livelock window must be >= 1");
}

StallState StallDetector::observe(const CycleActivity& a) {
    const bool occupied = a.occupancy > 0;
    frozen_ = (occupied && a.flits_moved == 0) ? frozen_ + 1 : 0;
    fruitless_ = (occupied && a.flits_delivered == 0 && a.flits_dropped == 0) ? fruitless_ + 1 : 0;

    if (frozen_ >= deadlock_window_) {
        state_ = StallState::Deadlock;
    } else if (fruitless_ >= livelock_window_ && a.flits_moved > 0) {
        state_ = StallState::Livelock;
    } else {
        state_ = StallState::Progress;
    }
    return state_;
}

StallState detect_stall(std::span<const CycleActivity> history, std::uint64_t deadlock_window,
                        std::uint64_t livelock_window) {
    StallDetector detector(deadlock_window, livelock_window);
    StallState s = StallState::Progress;
    for (const auto& a : history) s = detector.observe(a);
    return s;
}

// ---------------------------------------------------------------------------

Network::Network(const MeshConfig& config, std::vector<RouteOverride> overrides)
    : config_(config), dims_(config.dims()), overrides_(std::move(overrides)) {
    validate(config_);
    routers_.resize(static_cast<std::size_t>(dims_.routers()));
    for (int i = 0; i < dims_.routers(); ++i) routers_[static_cast<std::size_t>(i)].position = dims_.at(i);
    source_queues_.resize(routers_.size());
}

const RouterState& Network::router(Coordinate c) const {
    if (!dims_.contains(c)) throw InvalidArgument("router " + to_string(c) + " outside mesh");
    return routers_[static_cast<std::size_t>(dims_.index(c))];
}

std::uint64_t Network::enqueue(const Injection& inj) {
    if (!dims_.contains(inj.src)) throw InvalidArgument("injection source " + to_string(inj.src) + " outside mesh");
    if (!dims_.contains(inj.dest)) throw InvalidArgument("injection dest " + to_string(inj.dest) + " outside mesh");
    if (inj.length < 1) throw InvalidArgument("packet length must be >= 1");

    PacketRecord rec;
    rec.id = packets_.size();
    rec.src = inj.src;
    rec.dest = inj.dest;
    rec.length = inj.length;
    rec.label = inj.label;
    rec.release_cycle = cycle_;
    packets_.push_back(rec);
    source_queues_[static_cast<std::size_t>(dims_.index(inj.src))].push_back({rec.id, 0});
    return rec.id;
}

Flit Network::make_flit(const PacketRecord& p, int index) const {
    Flit f;
    f.kind = index == 0 ? FlitKind::Header : (index == p.length - 1 ? FlitKind::Tail : FlitKind::Body);
    f.packet_id = p.id;
    f.payload = static_cast<std::uint32_t>(p.id * 2654435761ULL) ^ static_cast<std::uint32_t>(index);
    f.src = p.src;
    f.dest = p.dest;
    f.route_dest = p.dest;
    f.length = p.length;
    f.inject_cycle = p.release_cycle;
    return f;
}

void Network::count(Coordinate router, PortId port, Direction dir) {
    if (monitor_ == nullptr) return;
    const auto q = static_cast<int>(cycle_ / static_cast<std::uint64_t>(config_.quantum_cycles));
    if (q < monitor_->quanta()) monitor_->record(q, router, port, dir);
}

PortId Network::route_header(int router, Flit& header) {
    const Coordinate here = routers_[static_cast<std::size_t>(router)].position;
    bool yx = false;
    for (const auto& ov : overrides_) {
        if (ov.router != here || !ov.active(cycle_) || !ov.matches(header.src, header.dest)) continue;
        if (ov.kind == AttackKind::Misrouting) {
            header.route_dest = ov.invalid_dest;
        } else if (ov.kind == AttackKind::DeadlockTamper) {
            yx = true;
        }
    }
    return yx ? yx_direction(here, header.route_dest) : xy_direction(here, header.route_dest);
}

bool Network::downstream_has_space(
    int router, PortId output, const std::vector<std::array<std::size_t, kPortCount>>& occupancy) const {
    if (output == PortId::Local) return true;
    const Coordinate next = nocs::step(routers_[static_cast<std::size_t>(router)].position, output);
    if (!dims_.contains(next)) return true;  // off-mesh: flit is dropped
    const auto n = static_cast<std::size_t>(dims_.index(next));
    return occupancy[n][port_index(opposite(output))] < static_cast<std::size_t>(config_.buffer_depth);
}

std::vector<Event> Network::step() {
    std::vector<Event> events;
    activity_ = {};
    const auto depth = static_cast<std::size_t>(config_.buffer_depth);
    const auto n_routers = routers_.size();

    // Injection from the PE source queues.
    for (std::size_t r = 0; r < n_routers; ++r) {
        auto& queue = source_queues_[r];
        auto& local = routers_[r].input_buffers[port_index(PortId::Local)];
        if (queue.empty() || local.size() >= depth) continue;
        auto& pending = queue.front();
        auto& rec = packets_[pending.id];
        local.push_back(make_flit(rec, pending.next_flit));
        if (pending.next_flit == 0) rec.state = PacketState::InNetwork;
        count(routers_[r].position, PortId::Local, Direction::In);
        events.push_back({EventKind::FlitInjected, rec.id, routers_[r].position, PortId::Local, PortId::Local});
        ++activity_.flits_moved;
        if (++pending.next_flit == rec.length) queue.pop_front();
    }

    std::vector<std::array<std::size_t, kPortCount>> occupancy(n_routers);
    for (std::size_t r = 0; r < n_routers; ++r) {
        for (std::size_t p = 0; p < kPortCount; ++p) occupancy[r][p] = routers_[r].input_buffers[p].size();
    }

    // Switch allocation against the occupancy snapshot.
    std::vector<Move> moves;
    for (std::size_t r = 0; r < n_routers; ++r) {
        auto& rs = routers_[r];
        std::array<std::vector<ArbitrationRequest>, kPortCount> requests;
        for (PortId in : kAllPorts) {
            auto& buf = rs.input_buffers[port_index(in)];
            if (buf.empty() || rs.granted_output[port_index(in)] || !buf.front().is_head()) continue;
            const PortId out = route_header(static_cast<int>(r), buf.front());
            requests[port_index(out)].push_back({in, rs.ages[port_index(in)]});
        }
        for (PortId out : kAllPorts) {
            auto& res = rs.reservations[port_index(out)];
            if (!res) {
                if (requests[port_index(out)].empty()) continue;
                const PortId winner = arbitrate_ttl(requests[port_index(out)]);
                const Flit& header = rs.input_buffers[port_index(winner)].front();
                res = Reservation{winner, header.packet_id, header.length};
                rs.granted_output[port_index(winner)] = out;
                max_grant_age_ = std::max(max_grant_age_, rs.ages[port_index(winner)]);
            }
            const auto& buf = rs.input_buffers[port_index(res->input)];
            if (buf.empty() || buf.front().packet_id != res->packet_id) continue;
            if (downstream_has_space(static_cast<int>(r), out, occupancy)) {
                moves.push_back({static_cast<int>(r), res->input, out});
            }
        }
    }

    // Switch traversal.
    std::vector<std::array<bool, kPortCount>> departed(n_routers);
    for (const Move& m : moves) {
        auto& rs = routers_[static_cast<std::size_t>(m.router)];
        auto& buf = rs.input_buffers[port_index(m.input)];
        Flit flit = buf.front();
        buf.pop_front();
        departed[static_cast<std::size_t>(m.router)][port_index(m.input)] = true;
        ++activity_.flits_moved;

        auto& res = rs.reservations[port_index(m.output)];
        if (--res->remaining == 0) {
            res.reset();
            rs.granted_output[port_index(m.input)].reset();
        }

        auto& rec = packets_[flit.packet_id];
        count(rs.position, m.output, Direction::Out);
        const Coordinate next = nocs::step(rs.position, m.output);

        if (m.output == PortId::Local) {
            ++rec.flits_delivered;
            ++activity_.flits_delivered;
            if (flit.is_tail()) {
                rec.state = PacketState::Delivered;
                rec.finish_cycle = cycle_;
                events.push_back({EventKind::PacketDelivered, rec.id, rs.position, m.input, m.output});
            } else {
                events.push_back({EventKind::FlitMoved, rec.id, rs.position, m.input, m.output});
            }
        } else if (!dims_.contains(next)) {
            ++rec.flits_dropped;
            ++activity_.flits_dropped;
            if (flit.is_tail()) {
                rec.state = PacketState::Dropped;
                rec.finish_cycle = cycle_;
                events.push_back({EventKind::PacketDropped, rec.id, rs.position, m.input, m.output});
            } else {
                events.push_back({EventKind::FlitMoved, rec.id, rs.position, m.input, m.output});
            }
        } else {
            if (flit.is_head()) ++rec.hops;
            const PortId in_port = opposite(m.output);
            routers_[static_cast<std::size_t>(dims_.index(next))].input_buffers[port_index(in_port)].push_back(flit);
            count(next, in_port, Direction::In);
            events.push_back({EventKind::FlitMoved, rec.id, rs.position, m.input, m.output});
        }
    }

    // Head-of-line ages.
    for (std::size_t r = 0; r < n_routers; ++r) {
        auto& rs = routers_[r];
        for (std::size_t p = 0; p < kPortCount; ++p) {
            if (rs.input_buffers[p].empty() || departed[r][p] || occupancy[r][p] == 0) {
                rs.ages[p] = 0;
            } else {
                ++rs.ages[p];
            }
        }
        activity_.occupancy += rs.occupancy();
    }

    ++cycle_;
    return events;
}

std::uint64_t Network::flits_in_buffers() const noexcept {
    std::uint64_t n = 0;
    for (const auto& r : routers_) n += r.occupancy();
    return n;
}

std::uint64_t Network::flits_pending() const noexcept {
    std::uint64_t n = 0;
    for (const auto& q : source_queues_) {
        for (const auto& p : q) n += static_cast<std::uint64_t>(packets_[p.id].length - p.next_flit);
    }
    return n;
}

// ---------------------------------------------------------------------------

SimResult run_simulation(const MeshConfig& config, const InjectionSchedule& schedule,
                         std::span<const AttackSpec> attacks, const std::string& workload_description) {
    validate(config);
    const MeshDims dims = config.dims();
    const Horizon horizon{config.quantum_cycles, config.total_quanta};

    InjectionSchedule full = schedule;
    std::vector<RouteOverride> overrides;
    for (const auto& a : attacks) {
        validate(a, dims);
        if (a.kind == AttackKind::Flooding) {
            full = apply_flooding(full, a, horizon);
        } else {
            overrides.push_back(compromise_router(dims, a, config.quantum_cycles));
        }
    }
    for (const auto& inj : full) {
        if (!dims.contains(inj.src) || !dims.contains(inj.dest)) {
            throw InvalidArgument("schedule entry " + to_string(inj.src) + "->" + to_string(inj.dest) +
                                  " outside mesh");
        }
    }

    TraceMeta meta;
    meta.dims = dims;
    meta.quantum_cycles = config.quantum_cycles;
    meta.total_quanta = config.total_quanta;
    meta.seed = config.seed;
    meta.buffer_depth = config.buffer_depth;
    meta.packet_length = config.packet_length;
    meta.workload = workload_description;
    meta.attacks = describe(attacks);
    meta.attack_count = static_cast<int>(attacks.size());

    SimResult result;
    if (config.monitoring) {
        result.trace = TrafficTrace(meta);
    } else {
        TraceMeta empty = meta;
        empty.total_quanta = 0;
        result.trace = TrafficTrace(empty);
    }
    if (config.monitoring) {
        for (const auto& a : attacks) {
            const Coordinate target = a.kind == AttackKind::Flooding ? a.victim : a.router;
            const int last = std::min(a.end_quantum, config.total_quanta - 1);
            for (int q = std::max(0, a.start_quantum); q <= last; ++q) result.trace.set_attacked(q, target, true);
        }
    }

    Network net(config, std::move(overrides));
    if (config.monitoring) net.attach_monitor(&result.trace);
    StallDetector detector(config.deadlock_window, config.effective_livelock_window());

    QuantumStats totals;
    std::size_t next = 0;
    const std::uint64_t end = config.total_cycles();
    const auto qc = static_cast<std::uint64_t>(config.quantum_cycles);
    SimOutcome outcome = SimOutcome::Completed;
    std::uint64_t c = 0;
    for (; c < end; ++c) {
        while (next < full.size() && full[next].cycle <= c) {
            if (full[next].cycle == c) {
                net.enqueue(full[next]);
                totals.flits_released += static_cast<std::uint64_t>(full[next].length);
            }
            ++next;
        }
        net.step();
        const auto& act = net.last_activity();
        totals.flits_delivered += act.flits_delivered;
        totals.flits_dropped += act.flits_dropped;

        const StallState st = detector.observe(act);
        const bool stop = st != StallState::Progress;
        if ((c + 1) % qc == 0 || stop) {
            QuantumStats qs = totals;
            qs.flits_in_buffers = net.flits_in_buffers();
            qs.flits_pending = net.flits_pending();
            qs.flits_injected = qs.flits_released - qs.flits_pending;
            result.quanta.push_back(qs);
        }
        if (stop) {
            outcome = st == StallState::Deadlock ? SimOutcome::Deadlock : SimOutcome::Livelock;
            ++c;
            break;
        }
    }

    result.status.outcome = outcome;
    result.status.cycles_run = c;
    for (const auto& p : net.packets()) {
        ++result.status.packets_injected;
        if (p.state == PacketState::Delivered) ++result.status.packets_delivered;
        if (p.state == PacketState::Dropped) ++result.status.packets_dropped;
    }
    if (outcome != SimOutcome::Completed && config.monitoring) {
        result.trace.truncate(static_cast<int>((c + qc - 1) / qc));
    }
    result.packets = net.packets();
    return result;
}

}  // namespace nocs
