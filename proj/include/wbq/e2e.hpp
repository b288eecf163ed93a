#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wbq/deploy.hpp"
#include "wbq/queue.hpp"

namespace wbq {

// Link-level delays feeding the end-to-end composition.
struct LinkTimings {
    double t_up_s = 0;   // one transaction upload, UE -> AP (mean over UEs)
    double t_bp_s = 0;   // block delivery from the winner AP to every peer
    double per_node_throughput_bps = 0;  // effective per-UE payload throughput
};

// Shared mode: every station (UEs and APs) contends on one channel; the block
// goes to the M-1 peers as sequential unicasts. Dedicated mode: each peer
// link has its own channel (parallel delivery, slowest peer dominates) and
// UEs contend only within their cell.
LinkTimings link_timings(const Deployment& dep, const PhyMacParams& phy,
                         const McsTable& mcs, long block_bits, long tx_bits,
                         bool shared);

struct E2EBreakdown {
    double t_up = 0;
    double t_q = 0;    // E[D] minus the mining component, reporting only
    double t_bg = 0;   // 1/mu_effective
    double t_bp = 0;
    double p_fork = 0;
    double t_bc = 0;   // t_up + (E[D] + t_bp) / (1 - p_fork)
};

// Composes queue metrics and link timings into the end-to-end confirmation
// delay: t_up + (E[D] + t_bp) / (1 - p_fork). E[D] is the per-attempt delay
// of the race-disabled queue at the winner mining rate; all fork re-work
// enters through the geometric retry factor. Fork params must carry either
// the timings' t_bp or 0 (the race-disabled baseline). Throws ModelError
// when the amplification overflows.
E2EBreakdown compose_e2e(const QueueParams& queue, const std::optional<ForkParams>& fp,
                         const LinkTimings& timings);

// One grid point of the parameter sweeps.
struct SweepPoint {
    double lambda = 0;
    int block_txns = 0;
    double timer_s = 0;
    bool forks = false;
};

struct SweepRow {
    SweepPoint point;
    double block_prop_delay_s = 0;
    std::optional<QueueMetrics> metrics;
    std::optional<E2EBreakdown> e2e;
    std::string error;  // non-empty when the point failed; other rows unaffected
};

// Cartesian grid in deterministic order (lambda outermost, forks innermost).
std::vector<SweepPoint> make_grid(const std::vector<double>& lambdas,
                                  const std::vector<int>& block_sizes_txns,
                                  const std::vector<double>& timers_s,
                                  const std::vector<bool>& fork_flags);

// Evaluates every point, isolating per-point failures into SweepRow::error.
// Points run on `threads` workers (0 = hardware concurrency); the result
// order always matches the grid order.
std::vector<SweepRow> evaluate_grid(const std::vector<SweepPoint>& grid,
                                    const std::function<SweepRow(const SweepPoint&)>& eval,
                                    int threads = 0);

}  // namespace wbq
