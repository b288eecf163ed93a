#include "wbq/wlan.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wbq/errors.hpp"

namespace wbq {

void PhyMacParams::validate() const {
    if (!(phy_header_s > 0 && ofdm_symbol_s > 0 && difs_s > 0 && sifs_s > 0 &&
          empty_slot_s > 0 && max_ppdu_s > 0))
        throw ConfigError("phy/mac: all durations must be > 0");
    if (cw_min < 1 || cw_max < cw_min)
        throw ConfigError("mac: contention window must satisfy 1 <= cw_min <= cw_max");
    if (data_len_bits <= 0 || ack_len_bits <= 0 || rts_len_bits <= 0 || cts_len_bits <= 0 ||
        mac_header_bits <= 0)
        throw ConfigError("mac: frame lengths must be > 0");
    if (!(bandwidth_hz > 0) || !(carrier_freq_hz > 0) || spatial_streams < 1)
        throw ConfigError("phy: bandwidth, carrier and spatial streams must be positive");
}

McsTable McsTable::defaults() {
    // 802.11ax, 20 MHz, 1 spatial stream, 0.8 us GI; sensitivities from the
    // standard's minimum receiver sensitivity table.
    McsTable t;
    t.entries = {
        {0, -82.0, 8.6e6},   {1, -79.0, 17.2e6},  {2, -77.0, 25.8e6},
        {3, -74.0, 34.4e6},  {4, -70.0, 51.6e6},  {5, -66.0, 68.8e6},
        {6, -65.0, 77.4e6},  {7, -64.0, 86.0e6},  {8, -59.0, 103.2e6},
        {9, -57.0, 114.7e6}, {10, -54.0, 129.0e6}, {11, -52.0, 143.4e6},
    };
    return t;
}

McsTable McsTable::load(std::istream& in) {
    McsTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        McsEntry e;
        if (!(ls >> e.index)) continue;  // blank or comment-only line
        if (!(ls >> e.min_rx_dbm >> e.rate_bps))
            throw ConfigError("mcs table line " + std::to_string(lineno) +
                              ": expected `mcs min_rx_dbm rate_bps`");
        if (!t.entries.empty() && e.index <= t.entries.back().index)
            throw ConfigError("mcs table line " + std::to_string(lineno) +
                              ": indices must be strictly increasing");
        t.entries.push_back(e);
    }
    if (t.entries.empty()) throw ConfigError("mcs table: no entries");
    return t;
}

McsTable McsTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("mcs table: cannot open " + path);
    return load(in);
}

std::optional<McsEntry> McsTable::select(double rx_power_dbm, double cca_dbm) const {
    if (rx_power_dbm < cca_dbm) return std::nullopt;
    std::optional<McsEntry> best;
    for (const auto& e : entries)
        if (rx_power_dbm >= e.min_rx_dbm) best = e;
    return best;
}

double dcf_attempt_prob(int contenders, const PhyMacParams& p) {
    p.validate();
    if (contenders < 1) throw ConfigError("dcf: contenders must be >= 1");
    const double W = p.cw_min;
    if (p.cw_min == p.cw_max) return 2.0 / (W + 1.0);

    // Two-equation fixed point: tau(pc) with pc = 1 - (1-tau)^(n-1), solved by
    // bisection on tau (g is monotone in tau).
    const int stages = static_cast<int>(std::lround(std::log2(
        static_cast<double>(p.cw_max) / static_cast<double>(p.cw_min))));
    auto tau_of = [&](double pc) {
        const double one_m2p = 1.0 - 2.0 * pc;
        // removable singularity at pc = 1/2
        if (std::abs(one_m2p) < 1e-7) return 2.0 / (W + 1.0 + 0.5 * stages * W);
        const double denom =
            one_m2p * (W + 1.0) + pc * W * (1.0 - std::pow(2.0 * pc, stages));
        return 2.0 * one_m2p / denom;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pc = 1.0 - std::pow(1.0 - mid, contenders - 1);
        const double g = mid - tau_of(pc);
        (g > 0.0 ? hi : lo) = mid;
        if (hi - lo < 1e-15) break;
    }
    const double tau = 0.5 * (lo + hi);
    const double pc = 1.0 - std::pow(1.0 - tau, contenders - 1);
    if (std::abs(tau - tau_of(pc)) > 1e-12)
        throw ModelError("dcf fixed point did not converge");
    return tau;
}

double data_frame_time(const PhyMacParams& p, double mcs_rate_bps, long payload_bits) {
    if (!(mcs_rate_bps > 0)) throw ConfigError("frame time: rate must be > 0");
    const double bits_per_symbol = mcs_rate_bps * p.ofdm_symbol_s;
    const double payload = static_cast<double>(p.mac_header_bits + p.service_tail_bits +
                                               payload_bits);
    const double symbols = std::ceil(payload / bits_per_symbol);
    const double t = p.phy_header_s + symbols * p.ofdm_symbol_s;
    if (t > p.max_ppdu_s)
        throw ModelError("data frame of " + std::to_string(payload_bits) +
                         " bits exceeds the maximum PPDU duration");
    return t;
}

double control_frame_time(const PhyMacParams& p, double base_rate_bps, long bits) {
    const double bits_per_symbol = base_rate_bps * p.ofdm_symbol_s;
    return p.phy_header_s + std::ceil(bits / bits_per_symbol) * p.ofdm_symbol_s;
}

SlotDurations slot_durations(const PhyMacParams& p, double mcs_rate_bps,
                             double base_rate_bps) {
    p.validate();
    SlotDurations s;
    s.empty_s = p.empty_slot_s;
    const double t_rts = control_frame_time(p, base_rate_bps, p.rts_len_bits);
    const double t_cts = control_frame_time(p, base_rate_bps, p.cts_len_bits);
    const double t_ack = control_frame_time(p, base_rate_bps, p.ack_len_bits);
    s.success_s = t_rts + 3.0 * p.sifs_s + t_cts +
                  data_frame_time(p, mcs_rate_bps, p.data_len_bits) + t_ack;
    s.collision_s = t_rts + p.difs_s;
    return s;
}

SlotProbs slot_probabilities(int contenders, double attempt_prob) {
    SlotProbs pr;
    const double n = contenders;
    pr.empty = std::pow(1.0 - attempt_prob, n);
    pr.success = n * attempt_prob * std::pow(1.0 - attempt_prob, n - 1.0);
    // grouped so that empty + success + collision re-sums to exactly 1.0
    pr.collision = 1.0 - (pr.empty + pr.success);
    if (pr.collision < 0.0) {  // rounding at n = 1, where no collision exists
        pr.collision = 0.0;
        pr.success = 1.0 - pr.empty;
    }
    return pr;
}

double saturation_throughput(int contenders, const PhyMacParams& p,
                             const SlotDurations& slots) {
    const double tau = dcf_attempt_prob(contenders, p);
    const SlotProbs pr = slot_probabilities(contenders, tau);
    const double mean_slot = pr.empty * slots.empty_s + pr.success * slots.success_s +
                             pr.collision * slots.collision_s;
    return pr.success * static_cast<double>(p.data_len_bits) / mean_slot;
}

double path_loss_db(double distance_m, const PhyMacParams& p) {
    if (!(distance_m > 0)) throw ConfigError("path loss: distance must be > 0");
    return p.pl0_db + 10.0 * p.alpha * std::log10(distance_m) + p.sigma_db / 2.0 +
           (p.gamma_obs_db / 2.0) * (distance_m / 10.0);
}

double message_delivery_time(const PhyMacParams& p, double mcs_rate_bps,
                             double base_rate_bps, long message_bits, int contenders) {
    p.validate();
    if (message_bits < 0) throw ConfigError("message bits must be >= 0");
    if (contenders < 1) throw ConfigError("message delivery: contenders must be >= 1");
    const long frames =
        std::max(1L, (message_bits + p.data_len_bits - 1) / p.data_len_bits);

    // Expected channel time per tagged success: n E[T_slot] / p_success with
    // environment slots carrying full payloads; the tagged success slot is
    // then resized for the actual fragment.
    const double tau = dcf_attempt_prob(contenders, p);
    const SlotProbs pr = slot_probabilities(contenders, tau);
    const SlotDurations slots = slot_durations(p, mcs_rate_bps, base_rate_bps);
    const double mean_slot = pr.empty * slots.empty_s + pr.success * slots.success_s +
                             pr.collision * slots.collision_s;
    const double per_frame_env = contenders * mean_slot / pr.success;

    const double t_rts = control_frame_time(p, base_rate_bps, p.rts_len_bits);
    const double t_cts = control_frame_time(p, base_rate_bps, p.cts_len_bits);
    const double t_ack = control_frame_time(p, base_rate_bps, p.ack_len_bits);
    double total = 0.0;
    long rest = message_bits;
    for (long f = 0; f < frames; ++f) {
        const long payload = std::min<long>(std::max(rest, 0L), p.data_len_bits);
        const double own_success = t_rts + 3.0 * p.sifs_s + t_cts +
                                   data_frame_time(p, mcs_rate_bps, payload) + t_ack;
        total += per_frame_env - slots.success_s + own_success;
        rest -= payload;
    }
    return total;
}

}  // namespace wbq
