#include "wbq/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "wbq/errors.hpp"

namespace wbq {

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

double parse_double(const std::string& s, const std::string& where) {
    std::string t = s;
    if (t == "inf" || t == "infinite") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw ConfigError(where + ": not a number: '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError(where + ": not an integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
    if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "off" || s == "0" || s == "no") return false;
    throw ConfigError(where + ": not a boolean: '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct KeySpec {
    std::string section;
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

std::vector<KeySpec> build_registry() {
    std::vector<KeySpec> reg;
    auto add_double = [&](const char* sec, const char* key, double RunConfig::* f) {
        reg.push_back({sec, key, [f](const RunConfig& c) { return fmt_double(c.*f); },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           c.*f = parse_double(v, w);
                       }});
    };
    auto add_int = [&](const char* sec, const char* key, int RunConfig::* f) {
        reg.push_back({sec, key, [f](const RunConfig& c) { return std::to_string(c.*f); },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           c.*f = static_cast<int>(parse_long(v, w));
                       }});
    };
    auto add_long = [&](const char* sec, const char* key, long RunConfig::* f) {
        reg.push_back({sec, key, [f](const RunConfig& c) { return std::to_string(c.*f); },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           c.*f = parse_long(v, w);
                       }});
    };
    auto add_bool = [&](const char* sec, const char* key, bool RunConfig::* f) {
        reg.push_back({sec, key,
                       [f](const RunConfig& c) { return c.*f ? std::string("true")
                                                             : std::string("false"); },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           c.*f = parse_bool(v, w);
                       }});
    };
    auto add_string = [&](const char* sec, const char* key, std::string RunConfig::* f) {
        reg.push_back({sec, key, [f](const RunConfig& c) { return c.*f; },
                       [f](RunConfig& c, const std::string& v, const std::string&) {
                           c.*f = v;
                       }});
    };
    auto add_double_list = [&](const char* sec, const char* key,
                               std::vector<double> RunConfig::* f) {
        reg.push_back({sec, key,
                       [f](const RunConfig& c) {
                           std::string s;
                           for (double v : c.*f) s += (s.empty() ? "" : ",") + fmt_double(v);
                           return s;
                       },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           (c.*f).clear();
                           for (const auto& item : split(v, ','))
                               (c.*f).push_back(parse_double(trim(item), w));
                       }});
    };
    auto add_int_list = [&](const char* sec, const char* key,
                            std::vector<int> RunConfig::* f) {
        reg.push_back({sec, key,
                       [f](const RunConfig& c) {
                           std::string s;
                           for (int v : c.*f) s += (s.empty() ? "" : ",") + std::to_string(v);
                           return s;
                       },
                       [f](RunConfig& c, const std::string& v, const std::string& w) {
                           (c.*f).clear();
                           for (const auto& item : split(v, ','))
                               (c.*f).push_back(
                                   static_cast<int>(parse_long(trim(item), w)));
                       }});
    };
    auto add_string_list = [&](const char* sec, const char* key,
                               std::vector<std::string> RunConfig::* f) {
        reg.push_back({sec, key,
                       [f](const RunConfig& c) {
                           std::string s;
                           for (const auto& v : c.*f) s += (s.empty() ? "" : ",") + v;
                           return s;
                       },
                       [f](RunConfig& c, const std::string& v, const std::string&) {
                           (c.*f).clear();
                           for (const auto& item : split(v, ','))
                               (c.*f).push_back(trim(item));
                       }});
    };

    add_int("deployment", "n_aps", &RunConfig::n_aps);
    add_double("deployment", "cell_radius_m", &RunConfig::cell_radius_m);
    add_int("deployment", "n_users", &RunConfig::n_users);
    add_int("deployment", "n_deployments", &RunConfig::n_deployments);
    add_int_list("deployment", "densities", &RunConfig::densities);
    add_string("deployment", "link_mode", &RunConfig::link_mode);

    add_double("phy", "bandwidth_mhz", &RunConfig::bandwidth_mhz);
    add_double("phy", "carrier_freq_ghz", &RunConfig::carrier_freq_ghz);
    add_int("phy", "spatial_streams", &RunConfig::spatial_streams);
    add_double("phy", "phy_header_us", &RunConfig::phy_header_us);
    add_double("phy", "ofdm_symbol_us", &RunConfig::ofdm_symbol_us);
    add_double("phy", "tx_power_dbm", &RunConfig::tx_power_dbm);
    add_double("phy", "pl0_db", &RunConfig::pl0_db);
    add_double("phy", "pathloss_exponent", &RunConfig::pathloss_exponent);
    add_double("phy", "shadowing_db", &RunConfig::shadowing_db);
    add_double("phy", "obstacles_db", &RunConfig::obstacles_db);
    add_string("phy", "mcs_table_file", &RunConfig::mcs_table_file);

    add_int("mac", "cw_min", &RunConfig::cw_min);
    add_int("mac", "cw_max", &RunConfig::cw_max);
    add_long("mac", "data_len_bits", &RunConfig::data_len_bits);
    add_long("mac", "ack_len_bits", &RunConfig::ack_len_bits);
    add_long("mac", "rts_len_bits", &RunConfig::rts_len_bits);
    add_long("mac", "cts_len_bits", &RunConfig::cts_len_bits);
    add_long("mac", "mac_header_bits", &RunConfig::mac_header_bits);
    add_int("mac", "max_ampdu_frames", &RunConfig::max_ampdu_frames);
    add_double("mac", "max_ppdu_ms", &RunConfig::max_ppdu_ms);
    add_double("mac", "difs_us", &RunConfig::difs_us);
    add_double("mac", "sifs_us", &RunConfig::sifs_us);
    add_double("mac", "slot_us", &RunConfig::slot_us);
    add_double("mac", "cca_dbm", &RunConfig::cca_dbm);

    add_double("bc", "mining_rate_blocks_s", &RunConfig::mining_rate_blocks_s);
    add_long("bc", "tx_len_bits", &RunConfig::tx_len_bits);
    add_int("bc", "queue_capacity_txns", &RunConfig::queue_capacity_txns);

    add_double("queue", "lambda_tps", &RunConfig::lambda_tps);
    add_int("queue", "block_size_txns", &RunConfig::block_size_txns);
    add_double("queue", "block_size_kbits", &RunConfig::block_size_kbits);
    add_double("queue", "timer_s", &RunConfig::timer_s);

    // fork.block_prop_ms accepts "auto" (derive from the link model).
    reg.push_back({"fork", "block_prop_ms",
                   [](const RunConfig& c) {
                       return c.block_prop_ms < 0 ? std::string("auto")
                                                  : fmt_double(c.block_prop_ms);
                   },
                   [](RunConfig& c, const std::string& v, const std::string& w) {
                       c.block_prop_ms = (v == "auto") ? -1.0 : parse_double(v, w);
                   }});
    add_bool("fork", "enabled", &RunConfig::fork_enabled);
    add_int("fork", "miners", &RunConfig::miners);
    add_bool("fork", "readd_all", &RunConfig::readd_all);

    add_int("sim", "replications", &RunConfig::replications);
    add_long("sim", "horizon_departures", &RunConfig::horizon_departures);
    add_double("sim", "horizon_s", &RunConfig::horizon_s);
    add_double("sim", "warmup_frac", &RunConfig::warmup_frac);
    reg.push_back({"sim", "seed",
                   [](const RunConfig& c) { return std::to_string(c.seed); },
                   [](RunConfig& c, const std::string& v, const std::string& w) {
                       try {
                           c.seed = std::stoull(v);
                       } catch (...) {
                           throw ConfigError(w + ": not a seed: '" + v + "'");
                       }
                   }});
    add_string("sim", "timer_anchor", &RunConfig::timer_anchor);
    add_bool("sim", "empty_block_on_expiry", &RunConfig::empty_block_on_expiry);

    add_double_list("sweep", "lambdas_tps", &RunConfig::sweep_lambdas_tps);
    add_int_list("sweep", "block_sizes_txns", &RunConfig::sweep_block_sizes_txns);
    add_double_list("sweep", "timers_s", &RunConfig::sweep_timers_s);
    add_string_list("sweep", "fork_modes", &RunConfig::sweep_fork_modes);

    add_double("compare", "tolerance_pct", &RunConfig::tolerance_pct);
    add_string("output", "dir", &RunConfig::out_dir);
    return reg;
}

const std::vector<KeySpec>& registry() {
    static const std::vector<KeySpec> reg = build_registry();
    return reg;
}

const KeySpec* find_key(const std::string& section, const std::string& key) {
    for (const auto& spec : registry())
        if (spec.section == section && spec.key == key) return &spec;
    return nullptr;
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value, const std::string& where) {
    const KeySpec* spec = find_key(section, key);
    if (!spec)
        throw ConfigError(where + ": unknown key '" + section + "." + key + "'");
    spec->set(c, value, where);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::string sec = section;
        const auto dot = key.find('.');
        if (dot != std::string::npos) {  // dotted form works anywhere
            sec = key.substr(0, dot);
            key = key.substr(dot + 1);
        }
        if (sec.empty()) throw ConfigError(where + ": key '" + key + "' before any section");
        apply_key(c, sec, key, value, where);
    }
    c.validate();
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

RunConfig parse_config_overrides(const std::string& inline_doc) {
    RunConfig c;
    int item_no = 0;
    for (const auto& raw : split(inline_doc, ';')) {
        ++item_no;
        const std::string item = trim(raw);
        if (item.empty()) continue;
        const std::string where = "override " + std::to_string(item_no);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos)
            throw ConfigError(where + ": expected section.key=value");
        apply_key(c, key.substr(0, dot), key.substr(dot + 1), value, where);
    }
    c.validate();
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::string out, section;
    for (const auto& spec : registry()) {
        if (spec.section != section) {
            section = spec.section;
            out += (out.empty() ? "[" : "\n[") + section + "]\n";
        }
        out += spec.key + " = " + spec.get(c) + "\n";
    }
    return out;
}

std::string config_overrides(const RunConfig& c) {
    static const RunConfig defaults;
    std::string out;
    for (const auto& spec : registry()) {
        const std::string v = spec.get(c);
        if (v != spec.get(defaults))
            out += (out.empty() ? "" : ";") + spec.section + "." + spec.key + "=" + v;
    }
    return out;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    for (const auto& spec : registry())
        if (spec.get(a) != spec.get(b)) return false;
    return true;
}

void RunConfig::validate() const {
    if (link_mode != "both" && link_mode != "shared" && link_mode != "dedicated")
        throw ConfigError("deployment.link_mode must be both, shared or dedicated");
    if (timer_anchor != "departure" && timer_anchor != "first_arrival")
        throw ConfigError("sim.timer_anchor must be departure or first_arrival");
    for (const auto& m : sweep_fork_modes)
        if (m != "on" && m != "off")
            throw ConfigError("sweep.fork_modes entries must be on or off");
    if (tx_len_bits <= 0) throw ConfigError("bc.tx_len_bits must be > 0");
    if (!(tolerance_pct >= 0)) throw ConfigError("compare.tolerance_pct must be >= 0");
    if (n_deployments < 1) throw ConfigError("deployment.n_deployments must be >= 1");
    if (densities.empty()) throw ConfigError("deployment.densities must not be empty");
}

int RunConfig::effective_block_txns() const {
    if (block_size_kbits <= 0.0) return block_size_txns;
    const double txns = block_size_kbits * 1000.0 / static_cast<double>(tx_len_bits);
    const double rounded = std::round(txns);
    if (std::abs(txns - rounded) > 1e-9 || rounded < 1.0)
        throw ConfigError("queue.block_size_kbits (" + fmt_double(block_size_kbits) +
                          ") is not a whole number of transactions of " +
                          std::to_string(tx_len_bits) + " bits");
    return static_cast<int>(rounded);
}

PhyMacParams RunConfig::phy_mac() const {
    PhyMacParams p;
    p.bandwidth_hz = bandwidth_mhz * 1e6;
    p.carrier_freq_hz = carrier_freq_ghz * 1e9;
    p.spatial_streams = spatial_streams;
    p.phy_header_s = phy_header_us * 1e-6;
    p.ofdm_symbol_s = ofdm_symbol_us * 1e-6;
    p.tx_power_dbm = tx_power_dbm;
    p.cw_min = cw_min;
    p.cw_max = cw_max;
    p.data_len_bits = data_len_bits;
    p.ack_len_bits = ack_len_bits;
    p.rts_len_bits = rts_len_bits;
    p.cts_len_bits = cts_len_bits;
    p.mac_header_bits = mac_header_bits;
    p.max_ampdu_frames = max_ampdu_frames;
    p.max_ppdu_s = max_ppdu_ms * 1e-3;
    p.difs_s = difs_us * 1e-6;
    p.sifs_s = sifs_us * 1e-6;
    p.empty_slot_s = slot_us * 1e-6;
    p.cca_dbm = cca_dbm;
    p.pl0_db = pl0_db;
    p.alpha = pathloss_exponent;
    p.sigma_db = shadowing_db;
    p.gamma_obs_db = obstacles_db;
    p.validate();
    return p;
}

McsTable RunConfig::mcs_table() const {
    return mcs_table_file.empty() ? McsTable::defaults()
                                  : McsTable::load_file(mcs_table_file);
}

std::optional<ForkParams> RunConfig::fork_params() const {
    if (!fork_enabled) return std::nullopt;
    ForkParams fp;
    fp.miners = miners;
    fp.block_prop_delay_s = resolve_block_prop_s(effective_block_txns());
    fp.readd_all_on_fork = readd_all;
    return fp;
}

QueueParams RunConfig::queue_params() const {
    QueueParams q;
    q.lambda = lambda_tps;
    q.mu = mining_rate_blocks_s;
    q.capacity = queue_capacity_txns;
    q.block_size = effective_block_txns();
    q.timer_s = timer_s;
    q.fork = fork_params();
    q.validate();
    return q;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.queue = queue_params();
    s.horizon_departures = horizon_departures;
    s.horizon_seconds = horizon_s;
    s.warmup_frac = warmup_frac;
    s.seed = seed;
    s.replications = replications;
    s.timer_from_first_arrival = timer_anchor == "first_arrival";
    s.empty_block_on_expiry = empty_block_on_expiry;
    return s;
}

double RunConfig::resolve_block_prop_s(int block_txns) const {
    if (block_prop_ms >= 0.0) return block_prop_ms * 1e-3;
    const Deployment dep = generate_deployment(n_users, seed, n_aps, cell_radius_m);
    const bool shared = link_mode == "shared";
    const LinkTimings t = link_timings(dep, phy_mac(), mcs_table(),
                                       static_cast<long>(block_txns) * tx_len_bits,
                                       tx_len_bits, shared);
    return t.t_bp_s;
}

}  // namespace wbq
