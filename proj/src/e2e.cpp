#include "wbq/e2e.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "wbq/errors.hpp"

namespace wbq {

LinkTimings link_timings(const Deployment& dep, const PhyMacParams& phy,
                         const McsTable& mcs, long block_bits, long tx_bits,
                         bool shared) {
    const DeploymentLinks links = assess_links(dep, phy, mcs);
    const double base = mcs.base_rate_bps();
    const int n_total = static_cast<int>(dep.ues.size() + dep.aps.size());
    const auto pop = dep.cell_population();

    LinkTimings t;
    if (!dep.ues.empty()) {
        double up = 0.0, thr = 0.0;
        for (std::size_t u = 0; u < dep.ues.size(); ++u) {
            const int contenders = shared ? n_total : std::max(pop[dep.ues[u].cell], 1);
            const double rate = links.ue_link[u].rate_bps;
            up += message_delivery_time(phy, rate, base, tx_bits, contenders);
            thr += static_cast<double>(phy.data_len_bits) /
                   message_delivery_time(phy, rate, base, phy.data_len_bits, contenders);
        }
        t.t_up_s = up / static_cast<double>(dep.ues.size());
        t.per_node_throughput_bps = thr / static_cast<double>(dep.ues.size());
    }

    // Block propagation along the relay tree: one unicast per peer. Shared
    // mode serializes all of them on the contended channel; dedicated mode
    // runs links in parallel, so the deepest relay path dominates.
    const RelayTree& tree = links.p2p;
    if (shared) {
        for (std::size_t a = 1; a < dep.aps.size(); ++a)
            t.t_bp_s += message_delivery_time(phy, tree.edge[a].rate_bps, base,
                                              block_bits, n_total);
    } else {
        std::vector<std::size_t> order;
        for (std::size_t a = 1; a < dep.aps.size(); ++a) order.push_back(a);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return tree.depth[x] < tree.depth[y];
        });
        std::vector<double> path_time(dep.aps.size(), 0.0);
        for (std::size_t a : order) {
            path_time[a] = path_time[tree.parent[a]] +
                           message_delivery_time(phy, tree.edge[a].rate_bps, base,
                                                 block_bits, 1);
            t.t_bp_s = std::max(t.t_bp_s, path_time[a]);
        }
    }
    return t;
}

E2EBreakdown compose_e2e(const QueueParams& queue, const std::optional<ForkParams>& fp,
                         const LinkTimings& timings) {
    // T_bp = 0 is the explicit fork-race-disabled baseline (p_fork = 0 at the
    // multi-miner rate); any other value must match the link timings.
    if (fp && fp->block_prop_delay_s != 0.0 &&
        std::abs(fp->block_prop_delay_s - timings.t_bp_s) > 1e-12)
        throw ModelError("compose: fork block propagation delay (" +
                         std::to_string(fp->block_prop_delay_s) +
                         ") does not match the link timings t_bp (" +
                         std::to_string(timings.t_bp_s) + ")");

    // The retry amplification already accounts for the fork re-work of the
    // whole queue+mine+propagate attempt, so the per-attempt delay comes from
    // the race-disabled queue at the winner mining rate; feeding the re-add
    // mixture in as well would count every retry twice.
    QueueParams qp = queue;
    if (fp) {
        qp.fork = *fp;
        qp.fork->block_prop_delay_s = 0.0;
    } else {
        qp.fork.reset();
    }

    const QueueAnalysis a = analyze_queue(qp);
    E2EBreakdown b;
    b.t_up = timings.t_up_s;
    b.t_bp = timings.t_bp_s;
    b.t_bg = 1.0 / qp.mu_effective();
    b.t_q = a.metrics.expected_delay - b.t_bg;
    b.p_fork = fp ? fork_probability(queue.mu, *fp) : 0.0;
    const double amplification =
        fp ? 1.0 / no_fork_probability(queue.mu, *fp) : 1.0;
    if (!std::isfinite(amplification))
        throw ModelError("fork amplification overflows for p_fork -> 1");
    b.t_bc = b.t_up + (a.metrics.expected_delay + b.t_bp) * amplification;
    if (!std::isfinite(b.t_bc)) throw ModelError("end-to-end delay overflows");
    return b;
}

std::vector<SweepPoint> make_grid(const std::vector<double>& lambdas,
                                  const std::vector<int>& block_sizes_txns,
                                  const std::vector<double>& timers_s,
                                  const std::vector<bool>& fork_flags) {
    std::vector<SweepPoint> grid;
    grid.reserve(lambdas.size() * block_sizes_txns.size() * timers_s.size() *
                 fork_flags.size());
    for (double lam : lambdas)
        for (int sb : block_sizes_txns)
            for (double tw : timers_s)
                for (bool fk : fork_flags) grid.push_back({lam, sb, tw, fk});
    return grid;
}

std::vector<SweepRow> evaluate_grid(const std::vector<SweepPoint>& grid,
                                    const std::function<SweepRow(const SweepPoint&)>& eval,
                                    int threads) {
    if (grid.empty()) throw ConfigError("sweep: empty grid");
    std::vector<SweepRow> rows(grid.size());
    unsigned n_workers = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, grid.size());

    auto work = [&](unsigned worker) {
        for (std::size_t i = worker; i < grid.size(); i += n_workers) {
            try {
                rows[i] = eval(grid[i]);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
            rows[i].point = grid[i];
        }
    };
    if (n_workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace wbq
