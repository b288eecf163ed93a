#include "wbq/queue.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "wbq/errors.hpp"

namespace wbq {

namespace {

// r^e with the exponent taken through log space so large e underflows to 0
// instead of raising FE_UNDERFLOW noise; r in (0,1).
double geom_pow(double r, double e) {
    if (e == 0.0) return 1.0;
    const double le = e * std::log(r);
    if (le < -745.0) return 0.0;
    return std::exp(le);
}

// Poisson pmf evaluated in log space.
double poisson_pmf(double mean, int n) {
    if (!(mean > 0.0)) return n == 0 ? 1.0 : 0.0;
    if (!std::isfinite(mean)) return 0.0;
    const double lp = n * std::log(mean) - mean - std::lgamma(n + 1.0);
    if (lp < -745.0) return 0.0;
    return std::exp(lp);
}

// Transition row out of state i when exactly `served` transactions leave at
// the departure: geometric arrival mass over [i-served, K-served], remainder
// on the boundary state.
std::vector<double> row_for_serve(int i, int served, const QueueParams& p) {
    const int K = p.capacity;
    const double mu_e = p.mu_effective();
    const double q = mu_e / (mu_e + p.lambda);
    const double r = p.lambda / (mu_e + p.lambda);
    assert(served <= i);
    const int lo = std::max(i - served, 0);
    const int hi = K - served;
    std::vector<double> row(static_cast<std::size_t>(K) + 1, 0.0);
    double partial = 0.0;
    for (int j = lo; j < hi; ++j) {
        row[j] = q * geom_pow(r, j - (i - served));
        partial += row[j];
    }
    row[hi] = std::max(0.0, 1.0 - partial);
    return row;
}

// Sum of row entries with index >= from (support outside the row is zero).
double tail_sum(const std::vector<double>& row, int from) {
    double s = 0.0;
    for (std::size_t j = static_cast<std::size_t>(std::max(from, 0)); j < row.size(); ++j)
        s += row[j];
    return s;
}

void check_state(int i, const QueueParams& p) {
    if (i < 0 || i > p.capacity)
        throw std::out_of_range("queue state " + std::to_string(i) + " outside 0.." +
                                std::to_string(p.capacity));
}

}  // namespace

void QueueParams::validate() const {
    if (!(lambda > 0.0)) throw ConfigError("queue: lambda must be > 0");
    if (!(mu > 0.0)) throw ConfigError("queue: mu must be > 0");
    if (capacity < 1) throw ConfigError("queue: capacity K must be >= 1");
    if (block_size < 1 || block_size > capacity)
        throw ConfigError("queue: block size must satisfy 1 <= S_B <= K");
    if (!(timer_s > 0.0)) throw ConfigError("queue: timer must be > 0 (or infinite)");
    if (fork) fork->validate();
}

double QueueParams::mu_effective() const {
    return fork ? static_cast<double>(fork->miners) * mu : mu;
}

double QueueParams::fork_prob() const {
    return fork ? fork_probability(mu, *fork) : 0.0;
}

double QueueParams::no_fork_prob() const {
    return fork ? no_fork_probability(mu, *fork) : 1.0;
}

std::string QueueParams::fingerprint() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "lambda=%.17g;mu=%.17g;K=%d;SB=%d;Tw=%.17g",
                  lambda, mu, capacity, block_size, timer_s);
    std::string s(buf);
    if (fork) {
        std::snprintf(buf, sizeof(buf), ";fork=M:%d,Tbp:%.17g,readd:%d", fork->miners,
                      fork->block_prop_delay_s, fork->readd_all_on_fork ? 1 : 0);
        s += buf;
    }
    return s;
}

int served_count(int state, const QueueParams& p) {
    check_state(state, p);
    return std::min(state, p.block_size);
}

std::vector<ServeOutcome> serve_outcomes(int state, const QueueParams& p) {
    const int base = served_count(state, p);
    if (!p.fork || !p.fork->readd_all_on_fork)
        return {{base, 1.0}};
    const double pf = p.fork_prob();
    if (pf <= 0.0) return {{base, 1.0}};
    return {{base, 1.0 - pf}, {0, pf}};
}

double transition_prob(int i, int j, const QueueParams& p) {
    check_state(i, p);
    check_state(j, p);
    double acc = 0.0;
    for (const auto& o : serve_outcomes(i, p))
        acc += o.prob * row_for_serve(i, o.served, p)[j];
    return acc;
}

TransitionMatrix build_transition_matrix(const QueueParams& p) {
    p.validate();
    const int n = p.capacity + 1;
    TransitionMatrix m;
    m.states = n;
    m.p.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (const auto& o : serve_outcomes(i, p)) {
            const auto row = row_for_serve(i, o.served, p);
            for (int j = 0; j < n; ++j) m.at(i, j) += o.prob * row[j];
        }
    }
    return m;
}

void TransitionMatrix::validate(double tol) const {
    for (int i = 0; i < states; ++i) {
        double sum = 0.0;
        for (int j = 0; j < states; ++j) {
            const double v = at(i, j);
            if (v < -tol || v > 1.0 + tol)
                throw ModelError("transition matrix entry out of [0,1] at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol)
            throw ModelError("transition matrix row " + std::to_string(i) +
                             " sums to " + std::to_string(sum));
    }
}

void Distribution::validate(double tol) const {
    double sum = 0.0;
    for (double v : probs) {
        if (v < -tol || v > 1.0 + tol)
            throw ModelError("distribution entry out of [0,1]: " + std::to_string(v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw ModelError("distribution sums to " + std::to_string(sum));
}

namespace {

double stationary_residual(const TransitionMatrix& P, const std::vector<double>& x) {
    double worst = 0.0;
    for (int j = 0; j < P.states; ++j) {
        double v = 0.0;
        for (int i = 0; i < P.states; ++i) v += x[i] * P.at(i, j);
        worst = std::max(worst, std::abs(v - x[j]));
    }
    return worst;
}

// Solve x (P^T - I) = 0 with the last equation replaced by sum(x) = 1, by
// Gaussian elimination with partial pivoting.
bool solve_stationary_direct(const TransitionMatrix& P, std::vector<double>& x) {
    const int n = P.states;
    std::vector<double> a(static_cast<std::size_t>(n) * (n + 1), 0.0);
    auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * (n + 1) + c]; };
    for (int r = 0; r < n - 1; ++r) {
        for (int c = 0; c < n; ++c) A(r, c) = P.at(c, r) - (r == c ? 1.0 : 0.0);
        A(r, n) = 0.0;
    }
    for (int c = 0; c < n; ++c) A(n - 1, c) = 1.0;
    A(n - 1, n) = 1.0;

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        if (std::abs(A(piv, col)) < 1e-300) return false;
        if (piv != col)
            for (int c = col; c <= n; ++c) std::swap(A(piv, c), A(col, c));
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            if (f == 0.0) continue;
            for (int c = col; c <= n; ++c) A(r, c) -= f * A(col, c);
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double v = A(r, n);
        for (int c = r + 1; c < n; ++c) v -= A(r, c) * x[c];
        x[r] = v / A(r, r);
    }
    return true;
}

void clean_probability_vector(std::vector<double>& x) {
    double sum = 0.0;
    for (double& v : x) {
        if (v < 0.0 && v > -1e-9) v = 0.0;
        sum += v;
    }
    if (sum > 0.0)
        for (double& v : x) v /= sum;
}

}  // namespace

Distribution departure_distribution(const TransitionMatrix& P, SolveReport* report) {
    P.validate(1e-9);
    constexpr double kTol = 1e-10;
    SolveReport rep;
    std::vector<double> x;

    if (solve_stationary_direct(P, x)) {
        clean_probability_vector(x);
        rep.residual = stationary_residual(P, x);
    } else {
        rep.residual = 1.0;
    }

    if (rep.residual > kTol) {
        // Power-iteration fallback for ill-conditioned cases.
        rep.direct = false;
        if (x.empty() || *std::min_element(x.begin(), x.end()) < 0.0)
            x.assign(P.states, 1.0 / P.states);
        std::vector<double> next(P.states, 0.0);
        constexpr int kMaxIter = 500000;
        for (rep.iterations = 0; rep.iterations < kMaxIter; ++rep.iterations) {
            for (int j = 0; j < P.states; ++j) {
                double v = 0.0;
                for (int i = 0; i < P.states; ++i) v += x[i] * P.at(i, j);
                next[j] = v;
            }
            x.swap(next);
            if (rep.iterations % 64 == 0) {
                rep.residual = stationary_residual(P, x);
                if (rep.residual <= kTol) break;
            }
        }
        rep.residual = stationary_residual(P, x);
        clean_probability_vector(x);
        if (rep.residual > kTol)
            throw ModelError("stationary solve did not converge: residual " +
                             std::to_string(rep.residual) + " after " +
                             std::to_string(rep.iterations) + " iterations");
    }

    if (report) *report = rep;
    Distribution d;
    d.probs = std::move(x);
    d.kind = DistKind::departure;
    d.validate();
    return d;
}

double timer_expiry_prob(int i, const QueueParams& p, const ModelVariants& v) {
    check_state(i, p);
    if (i >= p.block_size) return 0.0;
    if (!p.timer_enabled()) return 0.0;
    const double mean = p.lambda * p.timer_s;
    double tau = 0.0;
    for (int n = 0; n <= p.block_size - i - 1; ++n)
        tau += poisson_pmf(mean, v.tau_pmf_at_state_index ? i + n : n);
    return std::min(tau, 1.0);
}

double state_holding_time(int i, const QueueParams& p) {
    check_state(i, p);
    const int deficit = std::max(p.block_size - i, 0);
    const double fill = deficit > 0 ? static_cast<double>(deficit) / p.lambda : 0.0;
    return std::min(p.timer_s, fill) + 1.0 / p.mu_effective();
}

double state_holding_time_exact(int i, const QueueParams& p) {
    check_state(i, p);
    const int deficit = std::max(p.block_size - i, 0);
    if (deficit == 0 || !p.timer_enabled())
        return static_cast<double>(deficit) / p.lambda + 1.0 / p.mu_effective();
    // E[min(Erlang(d, lambda), T_w)] = E[min(N(lambda T_w), d)] / lambda
    //                                = sum_{m=1..d} P(N >= m) / lambda.
    const double mean = p.lambda * p.timer_s;
    double cdf = 0.0, slots = 0.0;
    for (int m = 1; m <= deficit; ++m) {
        cdf += poisson_pmf(mean, m - 1);
        slots += std::max(0.0, 1.0 - cdf);
    }
    return slots / p.lambda + 1.0 / p.mu_effective();
}

double conditional_fill_count_prob(int n, int i, const QueueParams& p,
                                   const ModelVariants& v) {
    check_state(i, p);
    if (i >= p.block_size)
        throw std::out_of_range("conditional fill count requires i < S_B");
    if (n < 0 || n > p.block_size - i - 1)
        throw std::out_of_range("fill count n outside 0..S_B-i-1");
    const double tau = timer_expiry_prob(i, p, v);
    if (tau <= 0.0)
        throw ModelError("conditional fill count undefined: timer never expires");
    const double mean = p.lambda * p.timer_s;
    return poisson_pmf(mean, v.tau_pmf_at_state_index ? i + n : n) / tau;
}

double mean_cycle_time(const Distribution& pi_d, const QueueParams& p) {
    double et = 0.0;
    for (int i = 0; i < pi_d.states(); ++i)
        et += pi_d.probs[i] * state_holding_time_exact(i, p);
    return et;
}

Distribution steady_state_distribution(const Distribution& pi_d, const QueueParams& p,
                                       const ModelVariants& v) {
    p.validate();
    const int K = p.capacity;
    if (pi_d.states() != K + 1)
        throw ModelError("departure distribution size does not match capacity");

    const double et = mean_cycle_time(pi_d, p);
    const double arrivals_per_cycle = p.lambda * et;
    if (!(arrivals_per_cycle > 0.0))
        throw ModelError("degenerate cycle: lambda*E[T] = 0");

    // Cached transition rows per source state: the mined-block row and the
    // all-readded (fork) row.
    std::vector<std::vector<double>> serve_rows(K + 1), zero_rows(K + 1);
    for (int i = 0; i <= K; ++i) {
        serve_rows[i] = row_for_serve(i, std::min(i, p.block_size), p);
        if (p.fork) zero_rows[i] = row_for_serve(i, 0, p);
    }

    const double pf = (p.fork && p.fork->readd_all_on_fork) ? p.fork_prob() : 0.0;

    // Probability that the occupancy level k is crossed upward by an arrival
    // during an epoch that starts at `src`, fills to `fill_to`, and then
    // serves per the fork mixture. The crossing condition is expressed on the
    // post-departure state j: occupancy before departure = j + served_apparent
    // where served_apparent = fill_to - src + serve.
    auto upcross = [&](int src, int fill_to, int k) {
        double acc = 0.0;
        const int base = std::min(src, p.block_size);
        const double w_serve = 1.0 - pf;
        {
            const int s_lim = v.upcross_kernel_serve ? base : fill_to - src + base;
            acc += w_serve * tail_sum(serve_rows[src], k - s_lim + 1);
        }
        if (pf > 0.0) {
            const int s_lim = v.upcross_kernel_serve ? 0 : fill_to - src;
            acc += pf * tail_sum(zero_rows[src], k - s_lim + 1);
        }
        return acc;
    };

    // Same crossing probability for an epoch whose block was cut short by the
    // timer at occupancy j (a departure state i plus n timed-in arrivals):
    // everything present is served unless the block forks.
    auto upcross_expiry = [&](int i, int n, int k) {
        const int j = i + n;
        if (v.expiry_serve_arrival_count) {
            const int s_e = std::min(n, p.block_size);
            double acc = (1.0 - pf) * tail_sum(serve_rows[j], k - s_e + 1);
            if (pf > 0.0) acc += pf * tail_sum(zero_rows[j], k - s_e + 1);
            return acc;
        }
        return upcross(j, j, k);
    };

    Distribution pis;
    pis.kind = DistKind::steady_state;
    pis.probs.assign(static_cast<std::size_t>(K) + 1, 0.0);

    double head = 0.0;
    for (int k = 0; k < K; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double tau = timer_expiry_prob(i, p, v);
            double branch = (1.0 - tau) * upcross(i, std::max(i, p.block_size), k);
            if (tau > 0.0) {
                double expiry = 0.0;
                const double mean = p.lambda * p.timer_s;
                for (int n = 0; n <= p.block_size - i - 1; ++n) {
                    const double pn =
                        poisson_pmf(mean, v.tau_pmf_at_state_index ? i + n : n) / tau;
                    expiry += pn * upcross_expiry(i, n, k);
                }
                branch += tau * expiry;
            }
            acc += pi_d.probs[i] * branch;
        }
        pis.probs[k] = acc / arrivals_per_cycle;
        head += pis.probs[k];
    }

    const double closing = 1.0 - head;
    if (closing < -1e-9)
        throw ModelError("steady-state reconstruction inconsistent: closing mass " +
                         std::to_string(closing) + " for " + p.fingerprint());
    pis.probs[K] = std::max(closing, 0.0);
    pis.validate();
    return pis;
}

Distribution arrival_seen_distribution(const Distribution& pi_s) {
    Distribution pa = pi_s;
    pa.kind = DistKind::arrival_seen;
    return pa;
}

QueueMetrics queue_metrics(const Distribution& pi_s, const Distribution& pi_d,
                           const QueueParams& p) {
    QueueMetrics m;
    for (int k = 0; k < pi_s.states(); ++k) m.expected_occupancy += k * pi_s.probs[k];
    m.blocking_prob = pi_s.probs.back();
    m.expected_interdeparture = mean_cycle_time(pi_d, p);
    if (m.blocking_prob >= 1.0 - 1e-12)
        throw ModelError("queue saturated: blocking probability is 1 for " +
                         p.fingerprint());
    m.expected_delay = m.expected_occupancy / (p.lambda * (1.0 - m.blocking_prob));
    return m;
}

QueueAnalysis analyze_queue(const QueueParams& p, const ModelVariants& v) {
    p.validate();
    QueueAnalysis a;
    a.P = build_transition_matrix(p);
    a.pi_d = departure_distribution(a.P, &a.solve);
    a.pi_s = steady_state_distribution(a.pi_d, p, v);
    a.metrics = queue_metrics(a.pi_s, a.pi_d, p);
    return a;
}

}  // namespace wbq
