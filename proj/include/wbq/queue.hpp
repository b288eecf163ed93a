#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wbq/fork.hpp"

namespace wbq {

// Finite batch-service queue: transactions arrive Poisson(lambda) into a
// queue of capacity K (served transactions included); a block of up to
// block_size transactions is mined whenever the block fills or a waiting
// timer expires, with Exp(mu_effective) mining time. The chain is embedded
// at departure (mining completion) instants.
struct QueueParams {
    double lambda = 1.0;  // arrival rate, transactions/s
    double mu = 1.0;      // mining rate of a single miner, blocks/s
    int capacity = 10;    // K, maximum queue length in transactions
    int block_size = 1;   // S_B in transactions
    double timer_s = std::numeric_limits<double>::infinity();  // T_w; inf disables
    std::optional<ForkParams> fork;  // multi-miner mode with fork re-queueing

    void validate() const;
    bool timer_enabled() const { return std::isfinite(timer_s); }
    // Winner rate M*mu in multi-miner (fork) mode, mu otherwise.
    double mu_effective() const;
    double fork_prob() const;     // 0 without fork params
    double no_fork_prob() const;  // 1 without fork params
    std::string fingerprint() const;
};

// Number of transactions leaving at a departure and its probability.
struct ServeOutcome {
    int served;
    double prob;
};

// Service behaviour from departure state i. Without forks a block serves
// min(i, block_size) (arrivals that fill the block mid-epoch cancel against
// the larger physical serve). With forks the block is discarded with
// probability p_fork and every transaction stays in place.
std::vector<ServeOutcome> serve_outcomes(int state, const QueueParams& p);

// min(i, block_size); the non-fork component of serve_outcomes.
int served_count(int state, const QueueParams& p);

// Square stochastic matrix over departure states 0..K.
struct TransitionMatrix {
    int states = 0;  // K + 1
    std::vector<double> p;

    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * states + j]; }
    double& at(int i, int j) { return p[static_cast<std::size_t>(i) * states + j]; }
    // Throws ModelError unless each row sums to 1 within tol and all entries
    // are probabilities.
    void validate(double tol = 1e-12) const;
};

// Probability of reaching departure state j from departure state i.
double transition_prob(int i, int j, const QueueParams& p);

TransitionMatrix build_transition_matrix(const QueueParams& p);

enum class DistKind { departure, steady_state, arrival_seen };

struct Distribution {
    std::vector<double> probs;
    DistKind kind = DistKind::departure;

    int states() const { return static_cast<int>(probs.size()); }
    void validate(double tol = 1e-9) const;
};

struct SolveReport {
    bool direct = true;    // direct linear solve vs power-iteration fallback
    int iterations = 0;    // power iterations performed (0 when direct)
    double residual = 0.0;  // max |pi P - pi|
};

// Stationary vector of P (pi = pi P, sum 1). Direct solve with a
// power-iteration fallback; throws ModelError if neither reaches 1e-10.
Distribution departure_distribution(const TransitionMatrix& P, SolveReport* report = nullptr);

// Alternate evaluation conventions for the timer-related expressions; the
// defaults evaluate the Poisson mass at the arrival count and credit the
// physically served block in the occupancy crossing sums. The switches
// reproduce the index-literal readings for comparison.
struct ModelVariants {
    bool tau_pmf_at_state_index = false;   // evaluate expiry pmf at j instead of j-i
    bool expiry_serve_arrival_count = false;  // serve min(n, S_B) at expiry instead of i+n
    bool upcross_kernel_serve = false;     // crossing limits use s(i) instead of fill level
};

// Probability the waiting timer expires before the block fills from state i:
// P(fewer than S_B - i Poisson(lambda*T_w) arrivals). Zero for i >= S_B.
double timer_expiry_prob(int i, const QueueParams& p, const ModelVariants& v = {});

// Nominal time from departure state i to the next departure:
// min(T_w, [S_B - i]^+ / lambda) + 1/mu_effective. The filling term bounds
// the mean fill time by the timer instead of averaging over the race.
double state_holding_time(int i, const QueueParams& p);

// Exact expectation of the same holding time: E[min(fill time, T_w)] +
// 1/mu_effective, with the fill time Erlang(S_B - i, lambda). Equals
// state_holding_time whenever the timer is disabled.
double state_holding_time_exact(int i, const QueueParams& p);

// P(exactly n arrivals during the timer window | the timer expires), i.e.
// Poisson pmf at n normalized by timer_expiry_prob. Requires i < S_B and
// 0 <= n <= S_B - i - 1.
double conditional_fill_count_prob(int n, int i, const QueueParams& p,
                                   const ModelVariants& v = {});

// Mean inter-departure time E[T] = sum_i pi_d(i) * E[T(i)], built on the
// exact per-state holding times.
double mean_cycle_time(const Distribution& pi_d, const QueueParams& p);

// Time-stationary occupancy distribution reconstructed from the departure
// distribution by renewal-reward over arrival up-crossings (equal to the
// arrival-seen distribution since arrivals are Poisson). Throws ModelError
// if the closing state mass comes out below -1e-9.
Distribution steady_state_distribution(const Distribution& pi_d, const QueueParams& p,
                                       const ModelVariants& v = {});

// What a Poisson arrival observes: the time-stationary distribution itself.
Distribution arrival_seen_distribution(const Distribution& pi_s);

struct QueueMetrics {
    double expected_occupancy = 0;      // E[Q], transactions
    double expected_delay = 0;          // E[D] = E[Q] / (lambda (1 - p_b)), seconds
    double blocking_prob = 0;           // p_b = steady-state mass at K
    double expected_interdeparture = 0; // E[T], seconds
};

// Occupancy/delay/blocking metrics via Little's law. Throws ModelError when
// p_b reaches 1 (no admitted traffic).
QueueMetrics queue_metrics(const Distribution& pi_s, const Distribution& pi_d,
                           const QueueParams& p);

// Whole analytical pipeline for one parameter point.
struct QueueAnalysis {
    TransitionMatrix P;
    Distribution pi_d;
    Distribution pi_s;
    QueueMetrics metrics;
    SolveReport solve;
};

QueueAnalysis analyze_queue(const QueueParams& p, const ModelVariants& v = {});

}  // namespace wbq
