#include "wbq/fork.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wbq/errors.hpp"

using namespace wbq;

TEST_CASE("fork probability closed form") {
    CHECK(fork_probability(15.0, {1, 1.0, true}) == 0.0);
    CHECK(fork_probability(15.0, {19, 0.0, true}) == 0.0);
    CHECK(fork_probability(15.0, {19, 1e-3, true}) ==
          doctest::Approx(1.0 - std::exp(-0.27)).epsilon(1e-12));
    CHECK(fork_probability(15.0, {19, 1e-3, true}) == doctest::Approx(0.2366).epsilon(1e-3));
}

TEST_CASE("fork probability matches the exponential race") {
    // The runner-up gap of the race decides every propagation delay at once.
    const std::vector<double> tbps = {1e-4, 1e-3, 1e-2};
    for (double mu : {1.0, 15.0}) {
        for (int m : {2, 5, 19}) {
            const auto mc = oracle::mc_fork_probability(mu, m, tbps, 200000, 1234);
            for (std::size_t k = 0; k < tbps.size(); ++k) {
                const double closed = fork_probability(mu, {m, tbps[k], true});
                CHECK(std::abs(closed - mc[k]) < 0.005);
            }
        }
    }
}

TEST_CASE("fork probability is monotone and saturates") {
    double prev = -1.0;
    for (double tbp : {1e-5, 1e-4, 1e-3, 1e-2, 0.1, 1.0}) {
        const double pf = fork_probability(15.0, {19, tbp, true});
        CHECK(pf > prev);
        prev = pf;
    }
    CHECK(prev > 1.0 - 1e-11);  // toward 1 for large propagation delays

    // Strictly increasing in miners and mu as well.
    CHECK(fork_probability(15.0, {5, 1e-3, true}) <
          fork_probability(15.0, {9, 1e-3, true}));
    CHECK(fork_probability(5.0, {5, 1e-3, true}) <
          fork_probability(10.0, {5, 1e-3, true}));
}

TEST_CASE("winner mining distribution") {
    auto [r1, m1] = winner_mining_distribution(15.0, 1);
    CHECK(r1 == 15.0);
    CHECK(m1 == doctest::Approx(1.0 / 15.0));
    auto [r3, m3] = winner_mining_distribution(15.0, 3);
    CHECK(r3 == 45.0);
    CHECK(m3 == doctest::Approx(1.0 / 45.0));

    const double mc = oracle::mc_winner_mean(15.0, 19, 400000, 7);
    CHECK(std::abs(mc - 1.0 / 285.0) / (1.0 / 285.0) < 0.01);
}

TEST_CASE("fork-amplified delay") {
    CHECK(fork_amplified_delay(0.2, 0.05, 0.01, 0.0) == doctest::Approx(0.26));
    CHECK(fork_amplified_delay(0.1, 0.1, 0.0, 0.5) == doctest::Approx(0.4));
    const double pf = 1.0 - std::exp(-0.27);
    CHECK(fork_amplified_delay(0.2, 0.0, 1e-3, pf) ==
          doctest::Approx(1e-3 + 0.2 / 0.7634).epsilon(1e-4));
    CHECK_THROWS_AS(fork_amplified_delay(0.1, 0.1, 0.0, 1.0), ModelError);
}

TEST_CASE("exact no-fork complement survives extreme exponents") {
    const ForkParams fp{19, 0.83, true};  // exponent ~224: p_fork rounds to 1.0
    const ForkAssessment a = assess_forks(15.0, fp);
    CHECK(a.no_fork_prob > 0.0);
    CHECK(a.no_fork_prob == doctest::Approx(std::exp(-15.0 * 18 * 0.83)));
    CHECK(a.effective_mining_rate == doctest::Approx(285.0));
    CHECK(a.winner_bg_delay_mean == doctest::Approx(1.0 / 285.0));
}
