#pragma once

#include <utility>

namespace wbq {

// Fork behaviour of a network of synchronized miners. A fork happens when a
// non-winning miner finishes its block while the winner's block is still
// propagating (within block_prop_delay_s of the winner's completion).
struct ForkParams {
    int miners = 1;                   // M, synchronized miners mining the same block
    double block_prop_delay_s = 0.0;  // T_bp, time to propagate a mined block
    bool readd_all_on_fork = true;    // worst case: every forked transaction is re-queued

    void validate() const;
};

struct ForkAssessment {
    double p_fork = 0.0;               // probability a mined block forks
    double no_fork_prob = 1.0;         // exp(-mu*(M-1)*T_bp); exact complement of p_fork
    double effective_mining_rate = 0;  // winner of M racing miners mines at M*mu
    double winner_bg_delay_mean = 0;   // 1/(M*mu)
};

// Probability that at least one of the M-1 losing miners finishes within
// T_bp of the winner: 1 - exp(-mu*(M-1)*T_bp).
double fork_probability(double mu, const ForkParams& fp);

// exp(-mu*(M-1)*T_bp). Kept separate because p_fork rounds to 1.0 in double
// precision once the exponent passes ~37, while the complement stays exact.
double no_fork_probability(double mu, const ForkParams& fp);

ForkAssessment assess_forks(double mu, const ForkParams& fp);

// First order statistic of M iid Exp(mu) mining times: {rate, mean}.
std::pair<double, double> winner_mining_distribution(double mu, int miners);

// End-to-end delay with geometric fork retries:
// t_up + (t_q_tbg + t_bp) / (1 - p_fork). Throws ModelError for p_fork >= 1.
double fork_amplified_delay(double tq_tbg, double t_bp, double t_up, double p_fork);

}  // namespace wbq
