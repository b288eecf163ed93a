#include "wbq/des.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "wbq/errors.hpp"

using namespace wbq;

namespace {

SimConfig small_config() {
    SimConfig sc;
    sc.queue.lambda = 5.0;
    sc.queue.mu = 15.0;
    sc.queue.capacity = 10;
    sc.queue.block_size = 2;
    sc.queue.timer_s = 2.0;
    sc.horizon_departures = 5000;
    sc.replications = 5;
    sc.seed = 11;
    return sc;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig sc = small_config();
    CHECK_NOTHROW(sc.validate());
    sc.horizon_departures = 0;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc = small_config();
    sc.horizon_departures = 500;  // fewer than 1000 post-warmup departures
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc = small_config();
    sc.warmup_frac = 1.0;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
}

TEST_CASE("conservation identity holds exactly per replication") {
    for (bool forks : {false, true}) {
        SimConfig sc = small_config();
        if (forks) sc.queue.fork = ForkParams{19, 1e-3, true};
        const SimResult r = run_sim(sc);
        for (const auto& rep : r.replications) {
            CHECK(rep.arrivals == rep.admitted + rep.dropped);
            CHECK(rep.admitted == rep.served + rep.in_system_end);
        }
    }
}

TEST_CASE("identical seeds give bit-identical results and traces") {
    std::ostringstream t1, t2;
    SimConfig a = small_config();
    a.trace = &t1;
    SimConfig b = small_config();
    b.trace = &t2;
    const SimResult r1 = run_sim(a);
    const SimResult r2 = run_sim(b);
    CHECK(r1.mean_delay == r2.mean_delay);
    CHECK(r1.drop_prob == r2.drop_prob);
    CHECK(r1.mean_occupancy == r2.mean_occupancy);
    CHECK(r1.departures == r2.departures);
    CHECK(t1.str() == t2.str());
    CHECK(!t1.str().empty());

    SimConfig c = small_config();
    c.seed = 12;
    const SimResult r3 = run_sim(c);
    CHECK(r1.mean_delay != r3.mean_delay);
}

TEST_CASE("trace records time, type and occupancy-after") {
    std::ostringstream trace;
    SimConfig sc = small_config();
    sc.horizon_departures = 1500;
    sc.warmup_frac = 0.0;
    sc.replications = 1;
    sc.trace = &trace;
    run_sim(sc);
    std::istringstream in(trace.str());
    std::string type;
    double t, prev_t = 0.0;
    int occ;
    int lines = 0;
    while (in >> t >> type >> occ) {
        CHECK(t >= prev_t);
        prev_t = t;
        CHECK((type == "arrival" || type == "drop" || type == "mine" ||
               type == "depart" || type == "fork"));
        CHECK(occ >= 0);
        CHECK(occ <= sc.queue.capacity);
        ++lines;
    }
    CHECK(lines > 3000);
}

TEST_CASE("near-empty system: delay approaches one mining time") {
    SimConfig sc;
    sc.queue.lambda = 0.5;
    sc.queue.mu = 50.0;
    sc.queue.capacity = 50;
    sc.queue.block_size = 1;
    sc.queue.timer_s = std::numeric_limits<double>::infinity();
    sc.horizon_departures = 4000;
    sc.replications = 5;
    sc.seed = 2;
    const SimResult r = run_sim(sc);
    CHECK(r.mean_delay == doctest::Approx(1.0 / 50.0).epsilon(0.05));
    CHECK(r.drop_prob == 0.0);
}

TEST_CASE("exact M/M/1/K at S_B=1 without timer") {
    SimConfig sc;
    sc.queue.lambda = 5.0;
    sc.queue.mu = 15.0;
    sc.queue.capacity = 10;
    sc.queue.block_size = 1;
    sc.queue.timer_s = std::numeric_limits<double>::infinity();
    sc.horizon_departures = 20000;
    sc.replications = 10;
    sc.seed = 5;
    const SimResult r = run_sim(sc);
    const double eq = oracle::mm1k_mean_occupancy(5.0, 15.0, 10);
    CHECK(std::abs(r.mean_occupancy - eq) <= 3.0 * r.occupancy_ci);
    // Closed-form blocking probability of the M/M/1/K.
    const double pb = oracle::mm1k_distribution(5.0, 15.0, 10).back();
    CHECK(std::abs(r.drop_prob - pb) <= std::max(3.0 * r.drop_ci, 2e-5));
    // Time-weighted histogram against the closed-form distribution.
    const auto pi = oracle::mm1k_distribution(5.0, 15.0, 10);
    for (int k = 0; k <= 10; ++k)
        if (pi[k] > 0.01) CHECK(std::abs(r.state_time_hist[k] - pi[k]) / pi[k] < 0.05);
}

TEST_CASE("reconstructed steady state matches the time-weighted histogram") {
    // Timer active but rarely binding: the analytical occupancy distribution
    // tracks the simulator state by state.
    QueueParams q;
    q.lambda = 5.0;
    q.mu = 15.0;
    q.capacity = 10;
    q.block_size = 2;
    q.timer_s = 2.0;
    const QueueAnalysis a = analyze_queue(q);
    SimConfig sc;
    sc.queue = q;
    sc.horizon_departures = 40000;
    sc.replications = 10;
    sc.seed = 29;
    const SimResult r = run_sim(sc);
    for (int k = 0; k <= q.capacity; ++k)
        if (r.state_time_hist[k] > 0.01)
            CHECK(std::abs(a.pi_s.probs[k] - r.state_time_hist[k]) /
                      r.state_time_hist[k] <
                  0.10);

    // PASTA: what an arrival observes is the time-stationary distribution.
    const Distribution pa = arrival_seen_distribution(a.pi_s);
    CHECK(pa.kind == DistKind::arrival_seen);
    for (int k = 0; k <= q.capacity; ++k) CHECK(pa.probs[k] == a.pi_s.probs[k]);
}

TEST_CASE("Little's law inside the simulation") {
    SimConfig sc = small_config();
    sc.horizon_departures = 20000;
    sc.replications = 10;
    const SimResult r = run_sim(sc);
    // admitted rate = lambda (1 - drop_prob)
    const double lhs = r.mean_occupancy;
    const double rhs = sc.queue.lambda * (1.0 - r.drop_prob) * r.mean_delay;
    CHECK(std::abs(lhs - rhs) / rhs < 0.02);
}

TEST_CASE("fork accounting and retry inflation") {
    SimConfig sc = small_config();
    sc.queue.fork = ForkParams{19, 1e-3, true};
    sc.horizon_departures = 20000;
    sc.replications = 5;
    const SimResult r = run_sim(sc);
    const double pf = sc.queue.fork_prob();
    const double observed = static_cast<double>(r.successful_blocks) /
                            static_cast<double>(r.departures);
    // binomial 3-sigma band
    const double sigma =
        std::sqrt(pf * (1.0 - pf) / static_cast<double>(r.departures));
    CHECK(std::abs(observed - (1.0 - pf)) < 3.0 * sigma + 1e-4);
    CHECK(r.fork_events + r.successful_blocks == r.departures);
}

TEST_CASE("mean service cycles per departure follow the geometric retry count") {
    // With p_fork = 0.5 a transaction needs on average 2 mining completions
    // per successful departure.
    SimConfig sc = small_config();
    sc.queue.lambda = 10.0;
    const double tbp = std::log(2.0) / (15.0 * 18.0);  // p_fork = 1/2
    sc.queue.fork = ForkParams{19, tbp, true};
    sc.horizon_departures = 30000;
    sc.replications = 5;
    const SimResult r = run_sim(sc);
    CHECK(sc.queue.fork_prob() == doctest::Approx(0.5).epsilon(1e-12));
    const double cycles = static_cast<double>(r.departures) /
                          static_cast<double>(r.successful_blocks);
    CHECK(cycles == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("timer anchor and empty-block switches change the dynamics") {
    SimConfig base = small_config();
    base.queue.lambda = 0.8;
    base.queue.timer_s = 0.4;
    const SimResult r0 = run_sim(base);

    SimConfig first_arrival = base;
    first_arrival.timer_from_first_arrival = true;
    const SimResult r1 = run_sim(first_arrival);
    CHECK(r0.mean_delay != r1.mean_delay);

    SimConfig no_empty = base;
    no_empty.empty_block_on_expiry = false;
    const SimResult r2 = run_sim(no_empty);
    // Without empty blocks every completion serves at least one transaction.
    for (const auto& rep : r2.replications) CHECK(rep.served >= rep.successful_blocks);
    CHECK(r2.departures > 0);
}

TEST_CASE("compare verdicts") {
    SimConfig sc = small_config();
    sc.horizon_departures = 10000;
    sc.replications = 5;
    const SimResult r = run_sim(sc);

    QueueMetrics identical;
    identical.expected_delay = r.mean_delay;
    identical.blocking_prob = r.drop_prob;
    identical.expected_occupancy = r.mean_occupancy;
    const CompareReport same = compare(identical, r, r.fingerprint, 0.10);
    CHECK(same.pass);
    for (const auto& row : same.rows) CHECK(row.rel_err == 0.0);

    // Inside the CI passes regardless of the relative tolerance.
    QueueMetrics nudged = identical;
    nudged.expected_delay += 0.5 * r.delay_ci;
    const CompareReport ci = compare(nudged, r, r.fingerprint, 0.0);
    CHECK(ci.rows[0].inside_ci);
    CHECK(ci.rows[0].pass);

    CHECK_THROWS_AS(compare(identical, r, "other-params", 0.1), ModelError);
}
