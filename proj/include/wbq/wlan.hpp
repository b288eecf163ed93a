#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wbq {

// PHY/MAC parameters of the contention-based 802.11ax channel carrying the
// blockchain traffic. Defaults reproduce the reference evaluation setup
// (20 MHz, single spatial stream, RTS/CTS protected, no aggregation).
struct PhyMacParams {
    double bandwidth_hz = 20e6;
    double carrier_freq_hz = 5e9;
    int spatial_streams = 1;
    double phy_header_s = 20e-6;
    double ofdm_symbol_s = 4e-6;
    double tx_power_dbm = 20.0;
    int cw_min = 32;
    int cw_max = 32;
    long data_len_bits = 12000;  // payload per MPDU, also E[L] in the slot model
    long ack_len_bits = 32;
    long rts_len_bits = 160;
    long cts_len_bits = 112;
    long mac_header_bits = 320;
    long service_tail_bits = 22;  // PHY service + tail fields inside the data PPDU
    int max_ampdu_frames = 1;
    double max_ppdu_s = 5.4884e-3;
    double difs_s = 34e-6;
    double sifs_s = 16e-6;
    double empty_slot_s = 9e-6;
    double cca_dbm = -82.0;
    double pl0_db = 5.0;        // loss at the reference distance
    double alpha = 4.4;         // path-loss exponent
    double sigma_db = 9.5;      // shadowing factor
    double gamma_obs_db = 30.0; // obstacles factor

    void validate() const;
};

struct SlotDurations {
    double empty_s = 0;
    double success_s = 0;
    double collision_s = 0;
};

struct SlotProbs {
    double empty = 0;
    double success = 0;
    double collision = 0;  // computed as 1 - empty - success
};

// Receiver-sensitivity table mapping rx power to the best usable MCS.
struct McsEntry {
    int index;
    double min_rx_dbm;
    double rate_bps;
};

struct McsTable {
    std::vector<McsEntry> entries;  // ascending MCS order

    // 802.11ax 20 MHz / 1 SS rates with standard minimum sensitivities.
    static McsTable defaults();
    // Columns: mcs  min_rx_dbm  rate_bps. '#' starts a comment.
    static McsTable load(std::istream& in);
    static McsTable load_file(const std::string& path);

    double base_rate_bps() const { return entries.front().rate_bps; }
    // Highest MCS whose sensitivity is met (boundary inclusive); nullopt when
    // the link is infeasible (below MCS 0 sensitivity or below CCA).
    std::optional<McsEntry> select(double rx_power_dbm, double cca_dbm) const;
};

// Per-slot transmission attempt probability of the DCF backoff. A single
// backoff stage (cw_min == cw_max == W) collapses to 2/(W+1); otherwise the
// standard two-equation fixed point is solved to 1e-12.
double dcf_attempt_prob(int contenders, const PhyMacParams& p);

// Airtime of a data PPDU carrying payload_bits at mcs_rate. Throws
// ModelError when the frame exceeds the maximum PPDU duration.
double data_frame_time(const PhyMacParams& p, double mcs_rate_bps, long payload_bits);

// Airtime of a control frame sent at the base (lowest MCS) rate.
double control_frame_time(const PhyMacParams& p, double base_rate_bps, long bits);

SlotDurations slot_durations(const PhyMacParams& p, double mcs_rate_bps,
                             double base_rate_bps);
inline SlotDurations slot_durations(const PhyMacParams& p, double mcs_rate_bps) {
    return slot_durations(p, mcs_rate_bps, McsTable::defaults().base_rate_bps());
}

SlotProbs slot_probabilities(int contenders, double attempt_prob);

// Saturation throughput: successful-slot payload per expected slot time.
double saturation_throughput(int contenders, const PhyMacParams& p,
                             const SlotDurations& slots);

// Deterministic log-distance loss with shadowing and obstacle terms.
double path_loss_db(double distance_m, const PhyMacParams& p);

// Expected channel time to push message_bits across one link contended by
// `contenders` saturated stations (1 = dedicated link). The message rides in
// ceil(bits / data_len) MPDUs; each costs the expected channel time per
// tagged success, with the tagged success slot sized for the actual
// fragment. At contenders == 1 this reduces to mean backoff plus the success
// exchange per frame.
double message_delivery_time(const PhyMacParams& p, double mcs_rate_bps,
                             double base_rate_bps, long message_bits, int contenders);

}  // namespace wbq
