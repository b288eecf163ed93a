#include "wbq/e2e.hpp"

#include <cmath>
#include <set>

#include "doctest.h"
#include "wbq/errors.hpp"

using namespace wbq;

namespace {

QueueParams fig_queue() {
    QueueParams q;
    q.lambda = 7.5;
    q.mu = 15.0;
    q.capacity = 10;
    q.block_size = 2;
    q.timer_s = 0.5;
    return q;
}

}  // namespace

TEST_CASE("deployment generation is deterministic and in-cell") {
    const Deployment a = generate_deployment(30, 42);
    const Deployment b = generate_deployment(30, 42);
    REQUIRE(a.aps.size() == 19);
    REQUIRE(a.ues.size() == 30);
    for (std::size_t i = 0; i < a.ues.size(); ++i) {
        CHECK(a.ues[i].pos.x == b.ues[i].pos.x);
        CHECK(a.ues[i].pos.y == b.ues[i].pos.y);
        CHECK(a.ues[i].cell == b.ues[i].cell);
        CHECK(distance_m(a.ues[i].pos, a.aps[a.ues[i].cell]) <= a.cell_radius_m + 1e-9);
    }
    const Deployment c = generate_deployment(30, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.ues.size(); ++i)
        any_diff = any_diff || c.ues[i].pos.x != a.ues[i].pos.x;
    CHECK(any_diff);

    // Hex grid: center cell first, ring distances sqrt(3)R and multiples.
    const double isd = std::sqrt(3.0) * a.cell_radius_m;
    CHECK(a.aps[0].x == 0.0);
    CHECK(a.aps[0].y == 0.0);
    std::multiset<int> ring;
    for (std::size_t k = 1; k < a.aps.size(); ++k) {
        const double d = distance_m(a.aps[0], a.aps[k]);
        CHECK(d > isd - 1e-9);
        CHECK(d < 2 * isd + 1e-9);
        ring.insert(static_cast<int>(std::lround(d / isd * 100)));
    }
    CHECK(ring.count(100) == 6);   // inner ring at ISD
    CHECK(ring.count(173) == 6);   // sqrt(3) ISD
    CHECK(ring.count(200) == 6);   // 2 ISD
}

TEST_CASE("ue at the cell centre gets the strongest link in its cell") {
    Deployment dep = generate_deployment(1, 7);
    const PhyMacParams phy;
    const McsTable mcs = McsTable::defaults();
    dep.ues[0].pos = dep.aps[dep.ues[0].cell];  // centre
    const DeploymentLinks centre = assess_links(dep, phy, mcs);
    dep.ues[0].pos.x += dep.cell_radius_m;  // edge
    const DeploymentLinks edge = assess_links(dep, phy, mcs);
    CHECK(centre.ue_link[0].rate_bps >= edge.ue_link[0].rate_bps);
}

TEST_CASE("link timings scale with block size and contention") {
    const Deployment dep = generate_deployment(20, 3);
    const PhyMacParams phy;
    const McsTable mcs = McsTable::defaults();

    const LinkTimings dedicated = link_timings(dep, phy, mcs, 6000, 3000, false);
    const LinkTimings shared = link_timings(dep, phy, mcs, 6000, 3000, true);
    CHECK(dedicated.t_bp_s > 0.0);
    CHECK(shared.t_bp_s > dedicated.t_bp_s);  // 18 sequential contended unicasts
    CHECK(shared.t_up_s > dedicated.t_up_s);
    CHECK(dedicated.per_node_throughput_bps > shared.per_node_throughput_bps);

    // t_bp non-decreasing in block size; zero-size block pays only overhead.
    double prev = 0.0;
    for (long bits : {0L, 3000L, 6000L, 12000L, 30000L}) {
        const LinkTimings t = link_timings(dep, phy, mcs, bits, 3000, false);
        CHECK(t.t_bp_s >= prev);
        prev = t.t_bp_s;
    }
    const LinkTimings overhead_only = link_timings(dep, phy, mcs, 0, 3000, false);
    const LinkTimings one_frame = link_timings(dep, phy, mcs, 1, 3000, false);
    CHECK(overhead_only.t_bp_s <= one_frame.t_bp_s);
}

TEST_CASE("dedicated block propagation: frozen frame-count worksheet") {
    // Default grid: every relay hop spans one inter-site distance
    // (sqrt(3) * 10 m), where the link budget lands on MCS 3 (34.4 Mb/s,
    // 137.6 bits/symbol). A 6 kbit block is one frame per hop:
    //   data    320+6000+22 bits -> 47 symbols -> 20 + 188 us
    //   success 40 + 3*16 + 36 + 208 + 24      = 356 us
    //   backoff (32-1)/2 slots                 = 139.5 us
    // and the deepest peers sit two hops out: 2 * 495.5 us = 991 us.
    const Deployment dep = generate_deployment(0, 1);
    const LinkTimings t =
        link_timings(dep, PhyMacParams{}, McsTable::defaults(), 6000, 3000, false);
    CHECK(t.t_bp_s == doctest::Approx(991e-6).epsilon(1e-9));
}

TEST_CASE("compose: plain sum without forks") {
    LinkTimings t;
    t.t_up_s = 0.0;
    t.t_bp_s = 0.004;
    const E2EBreakdown b = compose_e2e(fig_queue(), std::nullopt, t);
    CHECK(b.p_fork == 0.0);
    CHECK(b.t_bc == doctest::Approx(b.t_q + b.t_bg + t.t_bp_s).epsilon(1e-12));
    CHECK(b.t_bg == doctest::Approx(1.0 / 15.0));
    CHECK(b.t_bc >= b.t_up + b.t_q + b.t_bg + b.t_bp - 1e-12);
}

TEST_CASE("compose: fork amplification and parameter consistency") {
    LinkTimings t;
    t.t_up_s = 1e-3;
    t.t_bp_s = 1e-3;
    const ForkParams fp{19, 1e-3, true};
    const E2EBreakdown b = compose_e2e(fig_queue(), fp, t);
    CHECK(b.p_fork == doctest::Approx(1.0 - std::exp(-0.27)).epsilon(1e-9));
    CHECK(b.t_bc > b.t_up + b.t_q + b.t_bg + b.t_bp);

    // Mismatched propagation delays are rejected.
    const ForkParams wrong{19, 2e-3, true};
    CHECK_THROWS_AS(compose_e2e(fig_queue(), wrong, t), ModelError);

    // Doubling t_bp strictly increases the end-to-end delay.
    LinkTimings t2 = t;
    t2.t_bp_s = 2e-3;
    const E2EBreakdown b2 = compose_e2e(fig_queue(), ForkParams{19, 2e-3, true}, t2);
    CHECK(b2.t_bc > b.t_bc);
    CHECK(b2.p_fork > b.p_fork);
}

TEST_CASE("fork-enabled end-to-end delay dominates the fork-free composition") {
    LinkTimings t;
    t.t_up_s = 1e-3;
    t.t_bp_s = 1e-3;
    QueueParams q = fig_queue();
    q.mu = 15.0;
    const E2EBreakdown off = compose_e2e(q, ForkParams{19, 0.0, true}, t);
    LinkTimings t_on = t;
    const E2EBreakdown on = compose_e2e(q, ForkParams{19, 1e-3, true}, t_on);
    CHECK(on.t_bc > off.t_bc);
}

TEST_CASE("grid evaluation preserves order and isolates failures") {
    const auto grid = make_grid({5.0, 10.0}, {1, 2}, {0.5}, {false});
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].lambda == 5.0);
    CHECK(grid[0].block_txns == 1);
    CHECK(grid[1].block_txns == 2);
    CHECK(grid[2].lambda == 10.0);

    auto eval = [](const SweepPoint& pt) {
        if (pt.block_txns == 2) throw ModelError("synthetic point failure");
        SweepRow row;
        row.point = pt;
        QueueParams q;
        q.lambda = pt.lambda;
        q.mu = 15.0;
        q.capacity = 10;
        q.block_size = pt.block_txns;
        q.timer_s = pt.timer_s;
        row.metrics = analyze_queue(q).metrics;
        return row;
    };
    const auto rows = evaluate_grid(grid, eval, 2);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].metrics.has_value());
    CHECK(rows[0].error.empty());
    CHECK(!rows[1].metrics.has_value());
    CHECK(rows[1].error == "synthetic point failure");
    CHECK(rows[2].metrics.has_value());
    CHECK(rows[3].error == "synthetic point failure");
    CHECK(rows[1].point.block_txns == 2);

    CHECK_THROWS_AS(evaluate_grid({}, eval, 1), ConfigError);

    // single point grid -> single row
    const auto single = evaluate_grid(make_grid({5.0}, {1}, {0.5}, {false}), eval, 1);
    CHECK(single.size() == 1);
}
