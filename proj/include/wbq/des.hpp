#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wbq/queue.hpp"

namespace wbq {

// Discrete-event simulation of the batch-service queue; ground truth for the
// analytical pipeline. Every random draw comes from a per-replication
// mt19937_64 stream via inverse-transform sampling, so a (config, seed) pair
// fully determines the event trace.
struct SimConfig {
    QueueParams queue;
    long horizon_departures = 20000;  // mining completions per replication
    double horizon_seconds = 0.0;     // used instead when > 0
    double warmup_frac = 0.2;         // fraction of the horizon discarded
    std::uint64_t seed = 1;
    int replications = 10;
    bool timer_from_first_arrival = false;  // anchor timer at first queued txn
    bool empty_block_on_expiry = true;      // mine an empty block when the timer fires at 0
    std::ostream* trace = nullptr;          // event trace sink (forces sequential reps)

    void validate() const;
};

struct ReplicationResult {
    double mean_delay = 0;
    double drop_prob = 0;
    double mean_occupancy = 0;
    std::vector<double> state_time_hist;  // time-weighted, sums to 1
    long departures = 0;         // mining completions, forked ones included
    long successful_blocks = 0;  // completions that actually served
    long fork_events = 0;
    long arrivals = 0;  // full-run counts for the conservation identity
    long admitted = 0;
    long dropped = 0;
    long served = 0;
    int in_system_end = 0;
    double measured_time = 0;  // post-warmup simulated time
    long measured_departures = 0;
};

struct SimResult {
    double mean_delay = 0, delay_ci = 0;
    double drop_prob = 0, drop_ci = 0;
    double mean_occupancy = 0, occupancy_ci = 0;
    std::vector<double> state_time_hist;  // averaged across replications
    long departures = 0;
    long fork_events = 0;
    long successful_blocks = 0;
    std::string fingerprint;
    std::vector<ReplicationResult> replications;
};

SimResult run_sim(const SimConfig& cfg);

// Per-metric verdict: the analytical value passes when it falls inside the
// simulation confidence interval or within tol_rel relative error.
struct CompareRow {
    std::string metric;
    double analytical = 0;
    double simulated = 0;
    double ci_half = 0;
    double rel_err = 0;
    bool inside_ci = false;
    bool pass = false;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    bool pass = true;
};

// Throws ModelError when the parameter fingerprints disagree.
CompareReport compare(const QueueMetrics& analytical, const SimResult& sim,
                      const std::string& analytical_fingerprint, double tol_rel);

}  // namespace wbq
