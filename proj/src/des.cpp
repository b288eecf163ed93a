#include "wbq/des.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <random>

#include "wbq/errors.hpp"
#include "wbq/stats.hpp"

namespace wbq {

namespace {

// Inverse-transform draws on top of mt19937_64: fully specified, so traces
// are reproducible across standard libraries.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{seed, stream};
        gen = std::mt19937_64(seq);
    }
    double uniform() {  // in [0, 1)
        return (gen() >> 11) * 0x1.0p-53;
    }
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }
};

struct Tally {
    double warmup_end = -1.0;  // set once the warmup boundary is crossed
    double last_event_time = 0.0;
    int occupancy = 0;
    std::vector<double> occ_time;
    double sum_delay = 0.0;
    long delays = 0;
    long arrivals_measured = 0, dropped_measured = 0;

    explicit Tally(const SimConfig& c)
        : occ_time(static_cast<std::size_t>(c.queue.capacity) + 1, 0.0) {}

    bool measuring() const { return warmup_end >= 0.0; }
    void advance(double t) {
        if (measuring()) occ_time[occupancy] += t - std::max(last_event_time, warmup_end);
        last_event_time = t;
    }
};

struct Epoch {
    double p_fork;
    double mu_eff;
};

void trace_line(std::ostream* out, double t, const char* type, int occ) {
    if (out) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.9f %s %d\n", t, type, occ);
        *out << buf;
    }
}

ReplicationResult simulate_one(const SimConfig& cfg, int rep, std::ostream* trace) {
    const QueueParams& q = cfg.queue;
    Rng rng(cfg.seed, static_cast<std::uint64_t>(rep));
    const Epoch ep{q.fork && q.fork->readd_all_on_fork ? q.fork_prob() : 0.0,
                   q.mu_effective()};
    const bool by_departures = cfg.horizon_seconds <= 0.0;
    const long dep_target = cfg.horizon_departures;
    const long warmup_deps =
        by_departures ? static_cast<long>(std::ceil(cfg.warmup_frac * dep_target)) : 0;
    const double warmup_time = by_departures ? 0.0 : cfg.warmup_frac * cfg.horizon_seconds;

    ReplicationResult r;
    Tally tally(cfg);
    if (!by_departures) tally.warmup_end = warmup_time;
    if (by_departures && warmup_deps == 0) tally.warmup_end = 0.0;
    long departures_measured = 0;

    double now = 0.0;
    std::deque<double> admissions;  // admission times of queued transactions, FIFO
    double next_arrival = rng.exponential(q.lambda);

    // Moves simulated time forward to `until`, admitting or dropping every
    // arrival on the way.
    auto pump_arrivals = [&](double until) {
        while (next_arrival <= until) {
            now = next_arrival;
            if (!by_departures && tally.warmup_end < 0.0 && now >= warmup_time)
                tally.warmup_end = warmup_time;
            ++r.arrivals;
            const bool measured = tally.measuring() && now >= tally.warmup_end;
            if (measured) ++tally.arrivals_measured;
            if (tally.occupancy < q.capacity) {
                tally.advance(now);
                ++tally.occupancy;
                ++r.admitted;
                admissions.push_back(now);
                trace_line(trace, now, "arrival", tally.occupancy);
            } else {
                ++r.dropped;
                if (measured) ++tally.dropped_measured;
                trace_line(trace, now, "drop", tally.occupancy);
            }
            next_arrival = now + rng.exponential(q.lambda);
        }
        now = until;
    };

    auto done = [&]() {
        return by_departures ? r.departures >= dep_target : now >= cfg.horizon_seconds;
    };

    while (!done()) {
        // Fill phase: wait until the block fills or the timer fires.
        double mining_start = now;
        if (tally.occupancy < q.block_size) {
            double expiry = q.timer_enabled()
                                ? (cfg.timer_from_first_arrival && tally.occupancy == 0
                                       ? next_arrival + q.timer_s
                                       : now + q.timer_s)
                                : std::numeric_limits<double>::infinity();
            for (;;) {
                if (next_arrival < expiry) {
                    pump_arrivals(next_arrival);
                    if (tally.occupancy >= q.block_size) {
                        mining_start = now;
                        break;
                    }
                } else {
                    pump_arrivals(expiry);
                    if (tally.occupancy == 0 && !cfg.empty_block_on_expiry) {
                        expiry += q.timer_s;
                        continue;
                    }
                    mining_start = now;
                    break;
                }
            }
        }
        const int block_txns = std::min(tally.occupancy, q.block_size);
        trace_line(trace, mining_start, "mine", tally.occupancy);

        const double completion = mining_start + rng.exponential(ep.mu_eff);
        pump_arrivals(completion);

        ++r.departures;
        if (tally.measuring()) ++departures_measured;
        const bool forked = ep.p_fork > 0.0 && rng.uniform() < ep.p_fork;
        if (forked) {
            ++r.fork_events;
            trace_line(trace, now, "fork", tally.occupancy);
        } else {
            ++r.successful_blocks;
            tally.advance(now);
            for (int t = 0; t < block_txns; ++t) {
                const double admitted_at = admissions.front();
                admissions.pop_front();
                --tally.occupancy;
                ++r.served;
                if (tally.measuring() && now >= tally.warmup_end) {
                    tally.sum_delay += now - admitted_at;
                    ++tally.delays;
                }
            }
            trace_line(trace, now, "depart", tally.occupancy);
        }
        if (by_departures && tally.warmup_end < 0.0 && r.departures >= warmup_deps)
            tally.warmup_end = now;
    }
    tally.advance(now);

    r.in_system_end = tally.occupancy;
    r.mean_delay = tally.delays > 0 ? tally.sum_delay / tally.delays : 0.0;
    r.drop_prob = tally.arrivals_measured > 0
                      ? static_cast<double>(tally.dropped_measured) / tally.arrivals_measured
                      : 0.0;
    double total = 0.0;
    for (double t : tally.occ_time) total += t;
    r.measured_time = total;
    r.measured_departures = departures_measured;
    r.state_time_hist.assign(tally.occ_time.size(), 0.0);
    if (total > 0.0) {
        double occ_weighted = 0.0;
        for (std::size_t k = 0; k < tally.occ_time.size(); ++k) {
            r.state_time_hist[k] = tally.occ_time[k] / total;
            occ_weighted += static_cast<double>(k) * tally.occ_time[k];
        }
        r.mean_occupancy = occ_weighted / total;
    }
    return r;
}

}  // namespace

void SimConfig::validate() const {
    queue.validate();
    if (replications < 1) throw ConfigError("sim: replications must be >= 1");
    if (!(warmup_frac >= 0.0 && warmup_frac < 1.0))
        throw ConfigError("sim: warmup fraction must be in [0, 1)");
    if (horizon_seconds <= 0.0) {
        if (horizon_departures <= 0) throw ConfigError("sim: zero horizon");
        const double post = (1.0 - warmup_frac) * static_cast<double>(horizon_departures);
        if (post < 1000.0)
            throw ConfigError("sim: horizon leaves fewer than 1000 post-warmup departures");
    }
}

SimResult run_sim(const SimConfig& cfg) {
    cfg.validate();
    SimResult out;
    out.fingerprint = cfg.queue.fingerprint();
    out.replications.reserve(cfg.replications);
    for (int rep = 0; rep < cfg.replications; ++rep)
        out.replications.push_back(simulate_one(cfg, rep, rep == 0 ? cfg.trace : nullptr));

    std::vector<double> delays, drops, occs;
    out.state_time_hist.assign(static_cast<std::size_t>(cfg.queue.capacity) + 1, 0.0);
    for (const auto& r : out.replications) {
        delays.push_back(r.mean_delay);
        drops.push_back(r.drop_prob);
        occs.push_back(r.mean_occupancy);
        out.departures += r.departures;
        out.fork_events += r.fork_events;
        out.successful_blocks += r.successful_blocks;
        for (std::size_t k = 0; k < out.state_time_hist.size(); ++k)
            out.state_time_hist[k] += r.state_time_hist[k] / cfg.replications;
        if (cfg.horizon_seconds > 0.0 && r.measured_departures < 1000)
            throw ModelError("sim: time horizon left fewer than 1000 measured departures");
    }
    out.mean_delay = mean_of(delays);
    out.delay_ci = ci_half_width_95(delays);
    out.drop_prob = mean_of(drops);
    out.drop_ci = ci_half_width_95(drops);
    out.mean_occupancy = mean_of(occs);
    out.occupancy_ci = ci_half_width_95(occs);
    return out;
}

CompareReport compare(const QueueMetrics& analytical, const SimResult& sim,
                      const std::string& analytical_fingerprint, double tol_rel) {
    if (analytical_fingerprint != sim.fingerprint)
        throw ModelError("compare: parameter fingerprints differ:\n  " +
                         analytical_fingerprint + "\n  " + sim.fingerprint);
    CompareReport rep;
    auto add = [&](const std::string& name, double a, double s, double ci) {
        CompareRow row;
        row.metric = name;
        row.analytical = a;
        row.simulated = s;
        row.ci_half = ci;
        row.inside_ci = std::abs(a - s) <= ci;
        row.rel_err = std::abs(a - s) / (std::abs(s) > 1e-300 ? std::abs(s) : 1.0);
        row.pass = row.inside_ci || row.rel_err <= tol_rel;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    };
    add("mean_delay", analytical.expected_delay, sim.mean_delay, sim.delay_ci);
    add("drop_prob", analytical.blocking_prob, sim.drop_prob, sim.drop_ci);
    add("mean_occupancy", analytical.expected_occupancy, sim.mean_occupancy,
        sim.occupancy_ci);
    return rep;
}

}  // namespace wbq
