#include "wbq/fork.hpp"

#include <cmath>
#include <string>

#include "wbq/errors.hpp"

namespace wbq {

void ForkParams::validate() const {
    if (miners < 1) throw ConfigError("fork: miners must be >= 1");
    if (!(block_prop_delay_s >= 0.0))
        throw ConfigError("fork: block propagation delay must be >= 0");
}

double no_fork_probability(double mu, const ForkParams& fp) {
    fp.validate();
    if (!(mu > 0.0)) throw ConfigError("fork: mu must be > 0");
    return std::exp(-mu * static_cast<double>(fp.miners - 1) * fp.block_prop_delay_s);
}

double fork_probability(double mu, const ForkParams& fp) {
    fp.validate();
    if (!(mu > 0.0)) throw ConfigError("fork: mu must be > 0");
    return -std::expm1(-mu * static_cast<double>(fp.miners - 1) * fp.block_prop_delay_s);
}

ForkAssessment assess_forks(double mu, const ForkParams& fp) {
    ForkAssessment a;
    a.no_fork_prob = no_fork_probability(mu, fp);
    a.p_fork = -std::expm1(-mu * static_cast<double>(fp.miners - 1) * fp.block_prop_delay_s);
    auto [rate, mean] = winner_mining_distribution(mu, fp.miners);
    a.effective_mining_rate = rate;
    a.winner_bg_delay_mean = mean;
    return a;
}

std::pair<double, double> winner_mining_distribution(double mu, int miners) {
    if (!(mu > 0.0)) throw ConfigError("fork: mu must be > 0");
    if (miners < 1) throw ConfigError("fork: miners must be >= 1");
    const double rate = static_cast<double>(miners) * mu;
    return {rate, 1.0 / rate};
}

double fork_amplified_delay(double tq_tbg, double t_bp, double t_up, double p_fork) {
    if (p_fork >= 1.0)
        throw ModelError("fork amplification diverges: p_fork = " + std::to_string(p_fork));
    if (p_fork < 0.0) throw ModelError("p_fork must be non-negative");
    return t_up + (tq_tbg + t_bp) / (1.0 - p_fork);
}

}  // namespace wbq
