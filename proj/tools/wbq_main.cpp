// wbq: analytical + simulation toolkit for blockchain traffic riding on
// contention-based WLAN links. Subcommands cover the analytical queue
// pipeline, the discrete-event oracle, parameter sweeps, model-vs-simulation
// comparison, and end-to-end latency over generated deployments.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "wbq/config.hpp"
#include "wbq/csv.hpp"
#include "wbq/des.hpp"
#include "wbq/e2e.hpp"
#include "wbq/errors.hpp"
#include "wbq/queue.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigErr = 2;
constexpr int kModelErr = 3;
constexpr int kCompareFail = 4;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool no_forks = false;
    bool trace = false;
    std::optional<double> tolerance_pct;
};

wbq::RunConfig load_config(const GlobalOpts& g) {
    wbq::RunConfig cfg =
        g.config_path.empty() ? wbq::RunConfig{} : wbq::parse_config_file(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.no_forks) cfg.fork_enabled = false;
    if (g.tolerance_pct) cfg.tolerance_pct = *g.tolerance_pct;
    cfg.validate();
    return cfg;
}

std::string out_path(const wbq::RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

// Per-point config echo: the base document with the point's queue/fork keys
// pinned, so the row re-parses to the exact effective configuration.
wbq::RunConfig point_config(const wbq::RunConfig& base, const wbq::SweepPoint& pt,
                            double block_prop_s) {
    wbq::RunConfig c = base;
    c.lambda_tps = pt.lambda;
    c.block_size_txns = pt.block_txns;
    c.block_size_kbits = 0.0;
    c.timer_s = pt.timer_s;
    c.fork_enabled = pt.forks;
    if (pt.forks) c.block_prop_ms = block_prop_s * 1e3;
    return c;
}

wbq::QueueParams point_queue_params(const wbq::RunConfig& base, const wbq::SweepPoint& pt,
                                    double block_prop_s) {
    wbq::QueueParams q;
    q.lambda = pt.lambda;
    q.mu = base.mining_rate_blocks_s;
    q.capacity = base.queue_capacity_txns;
    q.block_size = pt.block_txns;
    q.timer_s = pt.timer_s;
    if (pt.forks) {
        wbq::ForkParams fp;
        fp.miners = base.miners;
        fp.block_prop_delay_s = block_prop_s;
        fp.readd_all_on_fork = base.readd_all;
        q.fork = fp;
    }
    q.validate();
    return q;
}

std::string kbits_of(const wbq::RunConfig& cfg, int block_txns) {
    return wbq::csv_num(static_cast<double>(block_txns) * cfg.tx_len_bits / 1000.0);
}

int cmd_analyze(const wbq::RunConfig& cfg, bool write_files) {
    const wbq::QueueParams q = cfg.queue_params();
    const wbq::QueueAnalysis a = wbq::analyze_queue(q);

    std::printf("queue: lambda=%g tps  mu=%g blocks/s  K=%d  S_B=%d txns  T_w=%g s\n",
                q.lambda, q.mu, q.capacity, q.block_size, q.timer_s);
    if (q.fork)
        std::printf("forks: miners=%d  T_bp=%g ms  p_fork=%.6f  mu_eff=%g blocks/s\n",
                    q.fork->miners, q.fork->block_prop_delay_s * 1e3, q.fork_prob(),
                    q.mu_effective());
    std::printf("E[Q]  = %.6f txns\nE[D]  = %.6f s\np_b   = %.6g\nE[T]  = %.6f s\n",
                a.metrics.expected_occupancy, a.metrics.expected_delay,
                a.metrics.blocking_prob, a.metrics.expected_interdeparture);
    std::printf("state  pi_d          pi_s\n");
    for (int k = 0; k <= q.capacity; ++k)
        std::printf("%5d  %.10f  %.10f\n", k, a.pi_d.probs[k], a.pi_s.probs[k]);

    if (write_files) {
        wbq::CsvWriter metrics(out_path(cfg, "metrics.csv"),
                               {"config", "lambda_tps", "block_size_txns",
                                "block_size_kbits", "timer_s", "forks", "p_fork",
                                "expected_occupancy_txns", "expected_delay_s",
                                "blocking_prob", "expected_interdeparture_s"});
        metrics.row({wbq::config_overrides(cfg), wbq::csv_num(q.lambda),
                     std::to_string(q.block_size), kbits_of(cfg, q.block_size),
                     wbq::csv_num(q.timer_s), q.fork ? "on" : "off",
                     wbq::csv_num(q.fork_prob()), wbq::csv_num(a.metrics.expected_occupancy),
                     wbq::csv_num(a.metrics.expected_delay),
                     wbq::csv_num(a.metrics.blocking_prob),
                     wbq::csv_num(a.metrics.expected_interdeparture)});
        wbq::CsvWriter dists(out_path(cfg, "distributions.csv"),
                             {"state", "pi_departure", "pi_steady_state"});
        for (int k = 0; k <= q.capacity; ++k)
            dists.row({std::to_string(k), wbq::csv_num(a.pi_d.probs[k]),
                       wbq::csv_num(a.pi_s.probs[k])});
        std::printf("wrote %s and %s\n", out_path(cfg, "metrics.csv").c_str(),
                    out_path(cfg, "distributions.csv").c_str());
    }
    return kOk;
}

int cmd_simulate(const wbq::RunConfig& cfg, bool trace) {
    wbq::SimConfig sc = cfg.sim_config();
    std::ofstream trace_out;
    if (trace) {
        trace_out.open(out_path(cfg, "trace.txt"));
        sc.trace = &trace_out;
    }
    const wbq::SimResult r = wbq::run_sim(sc);

    std::printf("simulated %d replications, %ld departures total\n", sc.replications,
                r.departures);
    std::printf("mean delay     = %.6f s  (95%% CI +-%.6f)\n", r.mean_delay, r.delay_ci);
    std::printf("drop prob      = %.6g    (95%% CI +-%.3g)\n", r.drop_prob, r.drop_ci);
    std::printf("mean occupancy = %.6f txns (95%% CI +-%.6f)\n", r.mean_occupancy,
                r.occupancy_ci);
    if (sc.queue.fork)
        std::printf("forks          = %ld of %ld completions\n", r.fork_events,
                    r.departures);

    wbq::CsvWriter sim(out_path(cfg, "sim.csv"),
                       {"config", "lambda_tps", "block_size_txns", "timer_s", "forks",
                        "replications", "departures", "mean_delay_s", "delay_ci_s",
                        "drop_prob", "drop_ci", "mean_occupancy_txns", "occupancy_ci",
                        "fork_events", "successful_blocks"});
    sim.row({wbq::config_overrides(cfg), wbq::csv_num(sc.queue.lambda),
             std::to_string(sc.queue.block_size), wbq::csv_num(sc.queue.timer_s),
             sc.queue.fork ? "on" : "off", std::to_string(sc.replications),
             std::to_string(r.departures), wbq::csv_num(r.mean_delay),
             wbq::csv_num(r.delay_ci), wbq::csv_num(r.drop_prob), wbq::csv_num(r.drop_ci),
             wbq::csv_num(r.mean_occupancy), wbq::csv_num(r.occupancy_ci),
             std::to_string(r.fork_events), std::to_string(r.successful_blocks)});
    wbq::CsvWriter hist(out_path(cfg, "histogram.csv"), {"state", "time_fraction"});
    for (std::size_t k = 0; k < r.state_time_hist.size(); ++k)
        hist.row({std::to_string(k), wbq::csv_num(r.state_time_hist[k])});
    std::printf("wrote %s and %s\n", out_path(cfg, "sim.csv").c_str(),
                out_path(cfg, "histogram.csv").c_str());
    if (trace) std::printf("wrote %s\n", out_path(cfg, "trace.txt").c_str());
    return kOk;
}

std::vector<std::string> sweep_header() {
    return {"config",          "lambda_tps",      "block_size_txns",
            "block_size_kbits", "timer_s",        "forks",
            "block_prop_ms",   "p_fork",          "expected_occupancy_txns",
            "expected_delay_s", "blocking_prob",  "expected_interdeparture_s",
            "sim_mean_delay_s", "sim_delay_ci_s", "sim_drop_prob",
            "sim_drop_ci",     "error"};
}

void sweep_rows(const wbq::RunConfig& cfg, const std::vector<wbq::SweepPoint>& grid,
                bool with_sim, wbq::CsvWriter& csv,
                std::vector<wbq::SweepRow>* collected = nullptr) {
    // Block propagation delays depend only on the block size; resolve once.
    std::vector<double> tbp_by_sb(static_cast<std::size_t>(cfg.queue_capacity_txns) + 1,
                                  0.0);
    for (const auto& pt : grid)
        if (pt.forks && tbp_by_sb[pt.block_txns] == 0.0)
            tbp_by_sb[pt.block_txns] = cfg.resolve_block_prop_s(pt.block_txns);

    for (const auto& pt : grid) {
        const double tbp = pt.forks ? tbp_by_sb[pt.block_txns] : 0.0;
        wbq::SweepRow row;
        row.point = pt;
        row.block_prop_delay_s = tbp;
        std::string sim_cols[4] = {"", "", "", ""};
        double p_fork = 0.0;
        try {
            const wbq::QueueParams q = point_queue_params(cfg, pt, tbp);
            p_fork = q.fork_prob();
            row.metrics = wbq::analyze_queue(q).metrics;
            if (with_sim) {
                wbq::SimConfig sc = cfg.sim_config();
                sc.queue = q;
                sc.trace = nullptr;
                const wbq::SimResult r = wbq::run_sim(sc);
                sim_cols[0] = wbq::csv_num(r.mean_delay);
                sim_cols[1] = wbq::csv_num(r.delay_ci);
                sim_cols[2] = wbq::csv_num(r.drop_prob);
                sim_cols[3] = wbq::csv_num(r.drop_ci);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        const wbq::RunConfig echo = point_config(cfg, pt, tbp);
        csv.row({wbq::config_overrides(echo), wbq::csv_num(pt.lambda),
                 std::to_string(pt.block_txns), kbits_of(cfg, pt.block_txns),
                 wbq::csv_num(pt.timer_s), pt.forks ? "on" : "off",
                 pt.forks ? wbq::csv_num(tbp * 1e3) : "",
                 row.metrics ? wbq::csv_num(p_fork) : "",
                 row.metrics ? wbq::csv_num(row.metrics->expected_occupancy) : "",
                 row.metrics ? wbq::csv_num(row.metrics->expected_delay) : "",
                 row.metrics ? wbq::csv_num(row.metrics->blocking_prob) : "",
                 row.metrics ? wbq::csv_num(row.metrics->expected_interdeparture) : "",
                 sim_cols[0], sim_cols[1], sim_cols[2], sim_cols[3], row.error});
        if (collected) collected->push_back(row);
    }
}

std::vector<bool> fork_flags_of(const wbq::RunConfig& cfg) {
    std::vector<bool> flags;
    for (const auto& m : cfg.sweep_fork_modes) flags.push_back(m == "on");
    return flags;
}

int cmd_sweep(const wbq::RunConfig& cfg, const std::string& recipe, bool with_sim) {
    if (recipe.empty()) {
        const auto grid = wbq::make_grid(cfg.sweep_lambdas_tps, cfg.sweep_block_sizes_txns,
                                         cfg.sweep_timers_s, fork_flags_of(cfg));
        if (grid.empty()) throw wbq::ConfigError("sweep: empty grid");
        wbq::CsvWriter csv(out_path(cfg, "sweep.csv"), sweep_header());
        sweep_rows(cfg, grid, with_sim, csv);
        std::printf("wrote %s (%zu rows)\n", out_path(cfg, "sweep.csv").c_str(),
                    grid.size());
        return kOk;
    }

    if (recipe == "validation") {
        // One file per (timer, forks) pane: model surface plus simulation
        // points over the lambda x block-size grid.
        for (double tw : cfg.sweep_timers_s) {
            for (bool forks : fork_flags_of(cfg)) {
                const auto grid = wbq::make_grid(
                    cfg.sweep_lambdas_tps, cfg.sweep_block_sizes_txns, {tw}, {forks});
                char name[64];
                std::snprintf(name, sizeof(name), "validation_tw%g_forks_%s.csv", tw,
                              forks ? "on" : "off");
                wbq::CsvWriter csv(out_path(cfg, name), sweep_header());
                sweep_rows(cfg, grid, true, csv);
                std::printf("wrote %s (%zu rows)\n", out_path(cfg, name).c_str(),
                            grid.size());
            }
        }
        return kOk;
    }

    if (recipe == "blocksize") {
        // Block-size / timer analysis, model only: full grid plus the
        // lambda-averaged delay and drop curves.
        std::vector<int> sbs;
        for (int sb = 1; sb <= cfg.queue_capacity_txns; ++sb) sbs.push_back(sb);
        const std::vector<double> timers = {0.1, 0.5, 1.0, 2.0};
        const auto grid =
            wbq::make_grid(cfg.sweep_lambdas_tps, sbs, timers, fork_flags_of(cfg));
        std::vector<wbq::SweepRow> rows;
        {
            wbq::CsvWriter csv(out_path(cfg, "blocksize.csv"), sweep_header());
            sweep_rows(cfg, grid, false, csv, &rows);
        }
        wbq::CsvWriter avg(out_path(cfg, "blocksize_avg.csv"),
                           {"block_size_txns", "block_size_kbits", "timer_s", "forks",
                            "mean_delay_s", "mean_drop_prob", "points", "errors"});
        for (double tw : timers) {
            for (bool forks : fork_flags_of(cfg)) {
                for (int sb : sbs) {
                    double d = 0, p = 0;
                    int n = 0, errs = 0;
                    for (const auto& r : rows) {
                        if (r.point.block_txns != sb || r.point.timer_s != tw ||
                            r.point.forks != forks)
                            continue;
                        if (!r.metrics) {
                            ++errs;
                            continue;
                        }
                        d += r.metrics->expected_delay;
                        p += r.metrics->blocking_prob;
                        ++n;
                    }
                    avg.row({std::to_string(sb), kbits_of(cfg, sb), wbq::csv_num(tw),
                             forks ? "on" : "off", n ? wbq::csv_num(d / n) : "",
                             n ? wbq::csv_num(p / n) : "", std::to_string(n),
                             std::to_string(errs)});
                }
            }
        }
        std::printf("wrote %s and %s\n", out_path(cfg, "blocksize.csv").c_str(),
                    out_path(cfg, "blocksize_avg.csv").c_str());
        return kOk;
    }

    throw wbq::ConfigError("unknown sweep recipe: " + recipe + " (use validation or blocksize)");
}

int cmd_compare(const wbq::RunConfig& cfg) {
    const auto grid = wbq::make_grid(cfg.sweep_lambdas_tps, cfg.sweep_block_sizes_txns,
                                     cfg.sweep_timers_s, fork_flags_of(cfg));
    if (grid.empty()) throw wbq::ConfigError("compare: empty grid");
    if (cfg.tolerance_pct <= 0.0)
        throw wbq::ConfigError(
            "compare: tolerance 0% cannot pass against a stochastic oracle");
    wbq::CsvWriter csv(out_path(cfg, "compare.csv"),
                       {"config", "lambda_tps", "block_size_txns", "timer_s", "forks",
                        "metric", "analytical", "simulated", "ci_half", "rel_err_pct",
                        "inside_ci", "pass"});
    int points_pass = 0, points_total = 0;
    for (const auto& pt : grid) {
        const double tbp = pt.forks ? cfg.resolve_block_prop_s(pt.block_txns) : 0.0;
        const wbq::QueueParams q = point_queue_params(cfg, pt, tbp);
        const wbq::QueueAnalysis a = wbq::analyze_queue(q);
        wbq::SimConfig sc = cfg.sim_config();
        sc.queue = q;
        sc.trace = nullptr;
        const wbq::SimResult r = wbq::run_sim(sc);
        const wbq::CompareReport rep =
            wbq::compare(a.metrics, r, q.fingerprint(), cfg.tolerance_pct / 100.0);
        const wbq::RunConfig echo = point_config(cfg, pt, tbp);
        for (const auto& row : rep.rows)
            csv.row({wbq::config_overrides(echo), wbq::csv_num(pt.lambda),
                     std::to_string(pt.block_txns), wbq::csv_num(pt.timer_s),
                     pt.forks ? "on" : "off", row.metric, wbq::csv_num(row.analytical),
                     wbq::csv_num(row.simulated), wbq::csv_num(row.ci_half),
                     wbq::csv_num(100.0 * row.rel_err), row.inside_ci ? "yes" : "no",
                     row.pass ? "yes" : "no"});
        ++points_total;
        points_pass += rep.pass;
        std::printf("%-4s lambda=%-5g S_B=%-2d T_w=%-4g forks=%-3s  delay err %.2f%%\n",
                    rep.pass ? "PASS" : "FAIL", pt.lambda, pt.block_txns, pt.timer_s,
                    pt.forks ? "on" : "off", 100.0 * rep.rows[0].rel_err);
    }
    std::printf("compare: %d/%d points pass at %.1f%% tolerance; wrote %s\n", points_pass,
                points_total, cfg.tolerance_pct, out_path(cfg, "compare.csv").c_str());
    return points_pass == points_total ? kOk : kCompareFail;
}

int cmd_e2e(const wbq::RunConfig& cfg) {
    const wbq::PhyMacParams phy = cfg.phy_mac();
    const wbq::McsTable mcs = cfg.mcs_table();
    const int block_txns = cfg.effective_block_txns();
    const long block_bits = static_cast<long>(block_txns) * cfg.tx_len_bits;

    std::vector<std::string> modes;
    if (cfg.link_mode == "both") {
        modes = {"shared", "dedicated"};
    } else {
        modes = {cfg.link_mode};
    }

    wbq::CsvWriter csv(out_path(cfg, "e2e.csv"),
                       {"config", "density", "seed", "link_mode", "forks", "t_up_s",
                        "e_delay_s", "t_bg_s", "t_bp_s", "p_fork", "t_bc_s",
                        "per_node_throughput_bps", "error"});
    struct Agg {
        double sum = 0, lo = 1e300, hi = -1e300;
        int n = 0, errs = 0;
    };
    std::map<std::string, Agg> agg;

    for (int density : cfg.densities) {
        for (int k = 0; k < cfg.n_deployments; ++k) {
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
            const wbq::Deployment dep =
                wbq::generate_deployment(density, seed, cfg.n_aps, cfg.cell_radius_m);
            for (const auto& mode : modes) {
                std::optional<wbq::LinkTimings> timings;
                std::string link_error;
                try {
                    timings = wbq::link_timings(dep, phy, mcs, block_bits,
                                                cfg.tx_len_bits, mode == "shared");
                } catch (const std::exception& e) {
                    link_error = e.what();
                }
                for (bool forks : {false, true}) {
                    const std::string key = std::to_string(density) + "," + mode + "," +
                                            (forks ? "on" : "off");
                    wbq::RunConfig echo = cfg;
                    echo.n_users = density;
                    echo.seed = seed;
                    echo.link_mode = mode;
                    echo.fork_enabled = forks;
                    std::string err = link_error;
                    std::optional<wbq::E2EBreakdown> b;
                    if (err.empty()) {
                        try {
                            wbq::QueueParams q;
                            q.lambda = cfg.lambda_tps;
                            q.mu = cfg.mining_rate_blocks_s;
                            q.capacity = cfg.queue_capacity_txns;
                            q.block_size = block_txns;
                            q.timer_s = cfg.timer_s;
                            std::optional<wbq::ForkParams> fp;
                            if (forks) {
                                fp = wbq::ForkParams{cfg.miners, timings->t_bp_s,
                                                     cfg.readd_all};
                                echo.block_prop_ms = timings->t_bp_s * 1e3;
                            }
                            b = wbq::compose_e2e(q, fp, *timings);
                        } catch (const std::exception& e) {
                            err = e.what();
                        }
                    }
                    csv.row({wbq::config_overrides(echo), std::to_string(density),
                             std::to_string(seed), mode, forks ? "on" : "off",
                             b ? wbq::csv_num(b->t_up) : "",
                             b ? wbq::csv_num(b->t_q + b->t_bg) : "",
                             b ? wbq::csv_num(b->t_bg) : "",
                             timings ? wbq::csv_num(timings->t_bp_s) : "",
                             b ? wbq::csv_num(b->p_fork) : "",
                             b ? wbq::csv_num(b->t_bc) : "",
                             timings ? wbq::csv_num(timings->per_node_throughput_bps) : "",
                             err});
                    Agg& a = agg[key];
                    if (b) {
                        a.sum += b->t_bc;
                        a.lo = std::min(a.lo, b->t_bc);
                        a.hi = std::max(a.hi, b->t_bc);
                        ++a.n;
                    } else {
                        ++a.errs;
                    }
                }
            }
        }
    }

    wbq::CsvWriter sum(out_path(cfg, "e2e_summary.csv"),
                       {"density", "link_mode", "forks", "mean_t_bc_s", "min_t_bc_s",
                        "max_t_bc_s", "deployments", "errors"});
    for (int density : cfg.densities) {
        for (const auto& mode : modes) {
            for (const char* forks : {"off", "on"}) {
                const std::string key =
                    std::to_string(density) + "," + mode + "," + forks;
                const Agg& a = agg[key];
                sum.row({std::to_string(density), mode, forks,
                         a.n ? wbq::csv_num(a.sum / a.n) : "",
                         a.n ? wbq::csv_num(a.lo) : "", a.n ? wbq::csv_num(a.hi) : "",
                         std::to_string(a.n), std::to_string(a.errs)});
            }
        }
    }
    std::printf("wrote %s and %s\n", out_path(cfg, "e2e.csv").c_str(),
                out_path(cfg, "e2e_summary.csv").c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch-service queue model and simulator for blockchain transactions "
                 "over contention-based WLAN links"};
    app.footer("Exit codes: 0 success, 2 config error, 3 numerical failure, "
               "4 comparison failure.");
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "Config file (defaults reproduce the "
                                              "reference setup)");
    app.add_option("--seed", g.seed, "RNG seed override")->envname("WBQ_SEED");
    app.add_option("--out", g.out_dir, "Output directory override")->envname("WBQ_OUT");
    app.add_flag("--no-forks", g.no_forks, "Disable fork modelling");
    app.add_option("--tolerance", g.tolerance_pct, "Comparison tolerance in percent");
    app.add_flag("--trace", g.trace, "Dump the event trace (simulate)");

    auto* analyze = app.add_subcommand("analyze", "Analytical pipeline for one point");
    bool analyze_files = false;
    analyze->add_flag("--write", analyze_files, "Also write metrics.csv/distributions.csv");
    auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation run");
    auto* sweep = app.add_subcommand("sweep", "Grid sweep to CSV");
    std::string recipe;
    bool with_sim = false;
    sweep->add_option("--recipe", recipe, "validation or blocksize preset grids");
    sweep->add_flag("--sim", with_sim, "Also simulate every point");
    auto* cmp = app.add_subcommand("compare", "Model vs simulation verdicts over the grid");
    auto* e2e = app.add_subcommand("e2e", "End-to-end latency over generated deployments");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigErr;
    }

    try {
        const wbq::RunConfig cfg = load_config(g);
        if (analyze->parsed()) return cmd_analyze(cfg, analyze_files || !g.out_dir.empty());
        if (simulate->parsed()) return cmd_simulate(cfg, g.trace);
        if (sweep->parsed()) return cmd_sweep(cfg, recipe, with_sim);
        if (cmp->parsed()) return cmd_compare(cfg);
        if (e2e->parsed()) return cmd_e2e(cfg);
    } catch (const wbq::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigErr;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kModelErr;
    }
    return kOk;
}
