#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wbq/des.hpp"
#include "wbq/e2e.hpp"
#include "wbq/queue.hpp"
#include "wbq/wlan.hpp"

namespace wbq {

// One structured document drives every command. Sections mirror the
// parameter grouping of the evaluation setup (deployment / phy / mac / bc)
// plus queue, fork, sim, sweep, compare and output sections. Units are
// embedded in the key names; defaults reproduce the reference setup, so an
// empty document is a valid config. Unknown keys are rejected with the
// offending line.
struct RunConfig {
    // [deployment]
    int n_aps = 19;
    double cell_radius_m = 10.0;
    int n_users = 30;
    int n_deployments = 10;
    std::vector<int> densities = {5, 10, 15, 20, 25, 30};
    std::string link_mode = "both";  // both | shared | dedicated

    // [phy]
    double bandwidth_mhz = 20.0;
    double carrier_freq_ghz = 5.0;
    int spatial_streams = 1;
    double phy_header_us = 20.0;
    double ofdm_symbol_us = 4.0;
    double tx_power_dbm = 20.0;
    double pl0_db = 5.0;
    double pathloss_exponent = 4.4;
    double shadowing_db = 9.5;
    double obstacles_db = 30.0;
    std::string mcs_table_file;  // empty = built-in table

    // [mac]
    int cw_min = 32;
    int cw_max = 32;
    long data_len_bits = 12000;
    long ack_len_bits = 32;
    long rts_len_bits = 160;
    long cts_len_bits = 112;
    long mac_header_bits = 320;
    int max_ampdu_frames = 1;
    double max_ppdu_ms = 5.4884;
    double difs_us = 34.0;
    double sifs_us = 16.0;
    double slot_us = 9.0;
    double cca_dbm = -82.0;

    // [bc]
    double mining_rate_blocks_s = 15.0;
    long tx_len_bits = 3000;
    int queue_capacity_txns = 10;

    // [queue]
    double lambda_tps = 7.5;
    int block_size_txns = 2;
    double block_size_kbits = 0.0;  // > 0 overrides block_size_txns via tx_len_bits
    double timer_s = 0.5;           // "inf" disables the timer

    // [fork]
    bool fork_enabled = false;
    int miners = 19;
    double block_prop_ms = -1.0;  // < 0 ("auto"): derived from the link model
    bool readd_all = true;

    // [sim]
    int replications = 10;
    long horizon_departures = 20000;
    double horizon_s = 0.0;
    double warmup_frac = 0.2;
    std::uint64_t seed = 1;
    std::string timer_anchor = "departure";  // departure | first_arrival
    bool empty_block_on_expiry = true;

    // [sweep]
    std::vector<double> sweep_lambdas_tps = {2.5, 5, 7.5, 10, 12.5, 15};
    std::vector<int> sweep_block_sizes_txns = {1, 2, 3, 4, 5};
    std::vector<double> sweep_timers_s = {0.5, 2};
    std::vector<std::string> sweep_fork_modes = {"off", "on"};

    // [compare]
    double tolerance_pct = 10.0;

    // [output]
    std::string out_dir = "out";

    void validate() const;

    // Derived views over the raw keys.
    int effective_block_txns() const;
    PhyMacParams phy_mac() const;
    McsTable mcs_table() const;
    QueueParams queue_params() const;  // fork attached when enabled
    std::optional<ForkParams> fork_params() const;
    SimConfig sim_config() const;
    // Propagation delay for a block of the configured size: the explicit
    // value when set, otherwise derived from the default-deployment links.
    double resolve_block_prop_s(int block_txns) const;
};

// Parses a config document: `[section]` headers, `key = value` lines, `#`
// comments. Also accepts the inline form `section.key=value; ...` used for
// the CSV echo. Starts from defaults; throws ConfigError with line numbers.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_overrides(const std::string& inline_doc);

// Canonical serializations. Round trip: parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& c);
// Only the keys that differ from the defaults, as `section.key=value;...`
// (empty string when everything is default). Re-parsing restores c exactly.
std::string config_overrides(const RunConfig& c);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace wbq
