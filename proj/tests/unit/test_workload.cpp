#include <gtest/gtest.h>

#include <map>
#include <set>

#include "nocs/noc.hpp"
#include "nocs/workload.hpp"

using namespace nocs;

namespace {

PatternSpec spec_of(PatternKind kind, double rate, std::uint64_t seed = 1) {
    PatternSpec s;
    s.kind = kind;
    s.rate = rate;
    s.seed = seed;
    return s;
}

bool sorted_by_cycle(const InjectionSchedule& s) {
    return std::is_sorted(s.begin(), s.end(), [](const Injection& a, const Injection& b) { return a.cycle < b.cycle; });
}

}  // namespace

TEST(Transposed, SwapsCoordinatesAndIdlesDiagonal) {
    const MeshDims d{4, 4};
    const auto s = gen_transposed(d, spec_of(PatternKind::Transposed, 3.0), {100, 10});
    std::set<std::pair<int, int>> flows;
    for (const auto& inj : s) {
        EXPECT_EQ(inj.dest, (Coordinate{inj.src.y, inj.src.x}));
        EXPECT_NE(inj.src.x, inj.src.y);
        flows.insert({d.index(inj.src), d.index(inj.dest)});
    }
    EXPECT_EQ(flows.size(), 12u);
    EXPECT_EQ(s.size(), 12u * 3u * 10u);
    EXPECT_TRUE(sorted_by_cycle(s));

    const auto six = gen_transposed({6, 6}, spec_of(PatternKind::Transposed, 1.0), {100, 4});
    std::set<std::pair<int, int>> six_flows;
    for (const auto& inj : six) six_flows.insert({inj.src.x * 10 + inj.src.y, inj.dest.x * 10 + inj.dest.y});
    EXPECT_EQ(six_flows.size(), 30u);
    EXPECT_TRUE(six_flows.count({12, 21}));
    EXPECT_THROW(gen_transposed({3, 4}, spec_of(PatternKind::Transposed, 1.0), {100, 4}), InvalidArgument);
}

TEST(Hotspot, FullFractionSendsEverythingToHotspot) {
    auto spec = spec_of(PatternKind::Hotspot, 2.0);
    spec.hotspot = {2, 1};
    spec.hot_fraction = 1.0;
    const auto s = gen_hotspot({4, 4}, spec, {100, 20});
    ASSERT_EQ(s.size(), 15u * 2u * 20u);
    for (const auto& inj : s) {
        EXPECT_EQ(inj.dest, spec.hotspot);
        EXPECT_NE(inj.src, spec.hotspot);
    }
}

TEST(Hotspot, ZeroFractionIsUniformOverOtherPes) {
    // Chi-squared goodness of fit on destinations of a single source.
    auto spec = spec_of(PatternKind::Hotspot, 10.0, 99);
    spec.hotspot = {3, 3};
    spec.hot_fraction = 0.0;
    const MeshDims d{4, 4};
    const auto s = gen_hotspot(d, spec, {1000, 1000});
    std::map<int, double> counts;
    double n = 0;
    for (const auto& inj : s) {
        if (inj.src != Coordinate{0, 0}) continue;
        counts[d.index(inj.dest)] += 1;
        n += 1;
    }
    ASSERT_EQ(n, 10000.0);
    EXPECT_EQ(counts.count(0), 0u);
    ASSERT_EQ(counts.size(), 15u);
    double chi2 = 0.0;
    const double expected = n / 15.0;
    for (const auto& [dest, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 36.12);  // df = 14, alpha = 0.001
}

TEST(Hotspot, DeterministicAndValidated) {
    auto spec = spec_of(PatternKind::Hotspot, 1.5, 4);
    EXPECT_EQ(gen_hotspot({3, 3}, spec, {100, 30}), gen_hotspot({3, 3}, spec, {100, 30}));
    spec.seed = 5;
    EXPECT_NE(gen_hotspot({3, 3}, spec, {100, 30}), gen_hotspot({3, 3}, spec_of(PatternKind::Hotspot, 1.5, 4), {100, 30}));
    spec.hot_fraction = 1.5;
    EXPECT_THROW(gen_hotspot({3, 3}, spec, {100, 30}), InvalidArgument);
    spec.hot_fraction = 0.5;
    spec.hotspot = {3, 0};
    EXPECT_THROW(gen_hotspot({3, 3}, spec, {100, 30}), InvalidArgument);
}

TEST(Uniform, FractionalRateAveragesOut) {
    const auto s = gen_uniform({4, 4}, spec_of(PatternKind::Uniform, 0.25, 3), {100, 2000});
    const double per_pe_per_quantum = static_cast<double>(s.size()) / (16.0 * 2000.0);
    EXPECT_NEAR(per_pe_per_quantum, 0.25, 0.02);
    for (const auto& inj : s) EXPECT_NE(inj.src, inj.dest);
    EXPECT_THROW(gen_uniform({4, 4}, spec_of(PatternKind::Uniform, -1.0), {100, 2}), InvalidArgument);
}

TEST(Periodic, CountsRepeatWithThePeriod) {
    auto spec = spec_of(PatternKind::PeriodicApp, 4.0);
    spec.period = 4;
    spec.burst = 1;
    spec.ramp = 1;
    spec.phase_step = 0;
    const MeshDims d{2, 2};
    const Horizon h{100, 16};
    const auto s = gen_periodic_app(d, spec, h);
    std::map<int, int> per_quantum;
    for (const auto& inj : s) {
        if (inj.src == Coordinate{0, 0}) ++per_quantum[static_cast<int>(inj.cycle / 100)];
        EXPECT_EQ(inj.dest, (Coordinate{(inj.src.x + 1) % 2, (inj.src.y + 1) % 2}));
        EXPECT_LT(inj.cycle % 100, 50u);  // spread 0.5
    }
    // Intensities 1/2, 1, 1/2, 0 at rate 4.
    for (int q = 0; q < 16; ++q) {
        const int expected[4] = {2, 4, 2, 0};
        EXPECT_EQ(per_quantum[q], expected[q % 4]) << q;
    }
}

TEST(Periodic, PhaseStepShiftsRouters) {
    auto spec = spec_of(PatternKind::PeriodicApp, 4.0);
    spec.period = 4;
    spec.burst = 1;
    spec.ramp = 1;
    spec.phase_step = 1;
    const MeshDims d{2, 2};
    const auto s = gen_periodic_app(d, spec, {100, 8});
    std::map<std::pair<int, int>, int> counts;
    for (const auto& inj : s) ++counts[{d.index(inj.src), static_cast<int>(inj.cycle / 100)}];
    for (int q = 0; q + 1 < 8; ++q) {
        const int ahead = counts[{1, q}];
        const int behind = counts[{0, q + 1}];
        EXPECT_EQ(ahead, behind) << q;
    }
}

TEST(Periodic, ZeroRateAndBadShapes) {
    auto spec = spec_of(PatternKind::PeriodicApp, 0.0);
    EXPECT_TRUE(gen_periodic_app({4, 4}, spec, {100, 8}).empty());
    spec.rate = 1.0;
    spec.period = 3;
    EXPECT_THROW(gen_periodic_app({4, 4}, spec, {100, 8}), InvalidArgument);
    spec.period = 8;
    spec.spread = 0.0;
    EXPECT_THROW(gen_periodic_app({4, 4}, spec, {100, 8}), InvalidArgument);
}

TEST(Flooding, AddsEvenlySpacedAttackPackets) {
    AttackSpec a;
    a.kind = AttackKind::Flooding;
    a.attacker = {0, 0};
    a.victim = {3, 3};
    a.rate = 50;
    a.start_quantum = 10;
    a.end_quantum = 19;
    const InjectionSchedule benign{{5, {1, 1}, {2, 2}, 8, Label::Benign}};
    const auto s = apply_flooding(benign, a, {1000, 100});
    ASSERT_EQ(s.size(), 501u);
    int attack = 0;
    for (const auto& inj : s) {
        if (inj.label != Label::Attack) continue;
        ++attack;
        EXPECT_GE(inj.cycle, 10'000u);
        EXPECT_LT(inj.cycle, 20'000u);
        EXPECT_EQ(inj.cycle % 20, 0u);
    }
    EXPECT_EQ(attack, 500);
    EXPECT_TRUE(sorted_by_cycle(s));

    a.start_quantum = 200;
    a.end_quantum = 300;
    EXPECT_EQ(apply_flooding(benign, a, {1000, 100}), benign);
    a.victim = a.attacker;
    EXPECT_THROW(apply_flooding(benign, a, {1000, 100}), InvalidArgument);
}

TEST(Misrouting, PacketsThroughTamperedRouterAreDropped) {
    MeshConfig c;
    c.width = 3;
    c.height = 3;
    c.quantum_cycles = 100;
    c.total_quanta = 10;
    // (0,1)->(2,1) passes through (1,1); (0,0)->(2,0) does not.
    InjectionSchedule s;
    for (std::uint64_t t = 0; t < 300; t += 30) {
        s.push_back({t, {0, 1}, {2, 1}, 4, Label::Benign});
        s.push_back({t, {0, 0}, {2, 0}, 4, Label::Benign});
    }
    AttackSpec a;
    a.kind = AttackKind::Misrouting;
    a.start_quantum = 0;
    a.end_quantum = 9;
    a.router = {1, 1};
    const std::vector<AttackSpec> attacks{a};
    const auto r = run_simulation(c, s, attacks);
    EXPECT_EQ(r.status.outcome, SimOutcome::Completed);
    for (const auto& p : r.packets) {
        if (p.src == Coordinate{0, 1}) {
            EXPECT_EQ(p.state, PacketState::Dropped);
            EXPECT_EQ(p.flits_dropped, 4);
        } else {
            EXPECT_EQ(p.state, PacketState::Delivered);
        }
    }
    EXPECT_EQ(r.status.packets_dropped, 10u);
    EXPECT_EQ(r.status.packets_delivered, 10u);
    const auto& last = r.quanta.back();
    EXPECT_EQ(last.flits_injected, last.flits_delivered + last.flits_dropped + last.flits_in_buffers);
}

TEST(Misrouting, UnmatchedFlowIsUntouched) {
    MeshConfig c;
    c.width = 3;
    c.height = 3;
    c.quantum_cycles = 100;
    c.total_quanta = 5;
    InjectionSchedule s;
    for (std::uint64_t t = 0; t < 200; t += 10) s.push_back({t, {0, 1}, {2, 1}, 4, Label::Benign});
    AttackSpec a;
    a.kind = AttackKind::Misrouting;
    a.start_quantum = 0;
    a.end_quantum = 4;
    a.router = {1, 1};
    a.flow_match = FlowMatch{{0, 0}, {2, 2}};
    const std::vector<AttackSpec> attacks{a};
    const auto tampered = run_simulation(c, s, attacks);
    const auto clean = run_simulation(c, s);
    EXPECT_EQ(tampered.status, clean.status);
    for (int q = 0; q < clean.trace.quanta(); ++q) {
        for (int i = 0; i < 9; ++i) {
            for (auto p : kAllPorts) {
                for (auto dir : {Direction::In, Direction::Out}) {
                    EXPECT_EQ(tampered.trace.count(q, c.dims().at(i), p, dir), clean.trace.count(q, c.dims().at(i), p, dir));
                }
            }
        }
    }
}

TEST(Attacks, ValidationAndNames) {
    AttackSpec flood;
    flood.kind = AttackKind::Flooding;
    flood.attacker = {0, 0};
    flood.victim = {1, 1};
    EXPECT_THROW(compromise_router({4, 4}, flood, 100), InvalidArgument);
    AttackSpec mis;
    mis.kind = AttackKind::Misrouting;
    mis.router = {1, 1};
    mis.start_quantum = 2;
    mis.end_quantum = 3;
    const auto ov = compromise_router({4, 4}, mis, 100);
    EXPECT_EQ(ov.first_cycle, 200u);
    EXPECT_EQ(ov.last_cycle, 399u);
    EXPECT_EQ(ov.invalid_dest, (Coordinate{4, 1}));
    mis.invalid_dest = Coordinate{2, 2};
    EXPECT_THROW(validate(mis, {4, 4}), InvalidArgument);
    mis.invalid_dest.reset();
    mis.end_quantum = 1;
    EXPECT_THROW(validate(mis, {4, 4}), InvalidArgument);
    for (auto k : {AttackKind::Flooding, AttackKind::Misrouting, AttackKind::DeadlockTamper}) {
        EXPECT_EQ(attack_from_name(attack_name(k)), k);
    }
    for (auto k : {PatternKind::Uniform, PatternKind::Transposed, PatternKind::Hotspot, PatternKind::PeriodicApp}) {
        EXPECT_EQ(pattern_from_name(pattern_name(k)), k);
    }
}
