// Independent oracles used by the test suites. Nothing here calls into the
// library's analytical pipeline; these are brute-force or closed-form routes
// to the same quantities.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Numeric quadrature of
//   integral_0^inf exp(-lambda t) (lambda t)^a / a! * mu exp(-mu t) dt
// by composite Simpson on a truncated range. Truncation error is far below
// the 1e-8 comparison tolerance for the tested parameter ranges.
inline double arrival_count_integral(double lambda, double mu, int a) {
    const double rate = lambda + mu;
    const double upper = 200.0 / rate;  // exp(-200) tail
    const int steps = 40000;            // even
    const double h = upper / steps;
    auto f = [&](double t) {
        if (t == 0.0) return a == 0 ? mu : 0.0;
        const double lp = a * std::log(lambda * t) - std::lgamma(a + 1.0) - lambda * t;
        return mu * std::exp(lp - mu * t);
    };
    double acc = f(0.0) + f(upper);
    for (int i = 1; i < steps; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Time-stationary occupancy distribution of an M/M/1/K queue (K+1 states).
inline std::vector<double> mm1k_distribution(double lambda, double mu, int K) {
    const double rho = lambda / mu;
    std::vector<double> pi(static_cast<std::size_t>(K) + 1);
    if (std::abs(rho - 1.0) < 1e-12) {
        std::fill(pi.begin(), pi.end(), 1.0 / (K + 1));
        return pi;
    }
    const double norm = (1.0 - rho) / (1.0 - std::pow(rho, K + 1));
    for (int k = 0; k <= K; ++k) pi[k] = norm * std::pow(rho, k);
    return pi;
}

inline double mm1k_mean_occupancy(double lambda, double mu, int K) {
    const auto pi = mm1k_distribution(lambda, mu, K);
    double eq = 0.0;
    for (int k = 0; k <= K; ++k) eq += k * pi[k];
    return eq;
}

// Departure-embedded chain of the M/M/1/K queue, written down directly from
// the queue dynamics: state i leaves min(i,1) transactions per service, the
// next state adds a geometric number of arrivals, capped by the remaining
// room. Solved by long power iteration.
inline std::vector<double> mm1k_embedded_departure_distribution(double lambda, double mu,
                                                                int K) {
    const int n = K + 1;
    const double q = mu / (mu + lambda);
    const double r = lambda / (mu + lambda);
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        const int s = i >= 1 ? 1 : 0;
        const int lo = std::max(i - s, 0);
        const int hi = K - s;
        double partial = 0.0;
        for (int j = lo; j < hi; ++j) {
            P[i][j] = q * std::pow(r, j - (i - s));
            partial += P[i][j];
        }
        P[i][hi] = 1.0 - partial;
    }
    std::vector<double> x(n, 1.0 / n), next(n, 0.0);
    for (int iter = 0; iter < 200000; ++iter) {
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) v += x[i] * P[i][j];
            next[j] = v;
        }
        double diff = 0.0;
        for (int j = 0; j < n; ++j) diff = std::max(diff, std::abs(next[j] - x[j]));
        x.swap(next);
        if (diff < 1e-15) break;
    }
    return x;
}

// Monte-Carlo race of `miners` Exp(mu) block times: a fork happens when the
// runner-up finishes within t_bp of the winner. The gap between the two
// smallest order statistics decides every t_bp at once.
inline std::vector<double> mc_fork_probability(double mu, int miners,
                                               const std::vector<double>& t_bps,
                                               long trials, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto draw = [&]() { return -std::log1p(-((gen() >> 11) * 0x1.0p-53)) / mu; };
    std::vector<long> hits(t_bps.size(), 0);
    for (long t = 0; t < trials; ++t) {
        double best = std::numeric_limits<double>::infinity();
        double second = std::numeric_limits<double>::infinity();
        for (int m = 0; m < miners; ++m) {
            const double x = draw();
            if (x < best) {
                second = best;
                best = x;
            } else if (x < second) {
                second = x;
            }
        }
        const double gap = second - best;
        for (std::size_t k = 0; k < t_bps.size(); ++k)
            if (gap <= t_bps[k]) ++hits[k];
    }
    std::vector<double> out(t_bps.size());
    for (std::size_t k = 0; k < t_bps.size(); ++k)
        out[k] = static_cast<double>(hits[k]) / static_cast<double>(trials);
    return out;
}

// Mean of the minimum of `miners` Exp(mu) draws.
inline double mc_winner_mean(double mu, int miners, long trials, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto draw = [&]() { return -std::log1p(-((gen() >> 11) * 0x1.0p-53)) / mu; };
    double acc = 0.0;
    for (long t = 0; t < trials; ++t) {
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < miners; ++m) best = std::min(best, draw());
        acc += best;
    }
    return acc / static_cast<double>(trials);
}

// Poisson arrival counter: fraction of windows with fewer than `need`
// arrivals of rate lambda within t_w.
inline double mc_timer_expiry(double lambda, double t_w, int need, long trials,
                              std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto draw = [&]() { return -std::log1p(-((gen() >> 11) * 0x1.0p-53)) / lambda; };
    long expired = 0;
    for (long t = 0; t < trials; ++t) {
        double clock = 0.0;
        int count = 0;
        while (count < need) {
            clock += draw();
            if (clock > t_w) break;
            ++count;
        }
        if (count < need) ++expired;
    }
    return static_cast<double>(expired) / static_cast<double>(trials);
}

// Slot-level simulation of single-stage DCF backoff: every station redraws a
// uniform backoff in {0..W-1} after transmitting and counts down one slot at
// a time. Returns {p_empty, p_success, p_collision, throughput_bps}.
struct SlotMcResult {
    double p_empty, p_success, p_collision, throughput_bps;
};

inline SlotMcResult mc_dcf_slots(int stations, int window, double payload_bits,
                                 double t_empty, double t_success, double t_collision,
                                 long slots, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto backoff = [&]() { return static_cast<int>(gen() % static_cast<unsigned>(window)); };
    std::vector<int> counter(stations);
    for (auto& c : counter) c = backoff();
    long empty = 0, success = 0, collision = 0;
    double busy_time = 0.0, payload = 0.0;
    for (long s = 0; s < slots; ++s) {
        int tx = 0;
        for (int i = 0; i < stations; ++i)
            if (counter[i] == 0) ++tx;
        if (tx == 0) {
            ++empty;
            busy_time += t_empty;
        } else if (tx == 1) {
            ++success;
            busy_time += t_success;
            payload += payload_bits;
        } else {
            ++collision;
            busy_time += t_collision;
        }
        // Busy or idle, each slot advances every counter by one; transmitters
        // redraw a fresh backoff.
        for (auto& c : counter) c = (c == 0) ? backoff() : c - 1;
    }
    SlotMcResult r;
    const double n = static_cast<double>(slots);
    r.p_empty = empty / n;
    r.p_success = success / n;
    r.p_collision = collision / n;
    r.throughput_bps = payload / busy_time;
    return r;
}

}  // namespace oracle
