#ifndef VIPSIM_CONFIG_HPP_
#define VIPSIM_CONFIG_HPP_

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vipsim/baselines.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/virtual_plane.hpp"

namespace vipsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sectioned key-value file: `[section]` headers, `key = value` lines, `#` or
/// `;` comments (full-line or trailing). Unknown sections or keys are
/// rejected up front.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text) {
        ConfigFile cf;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find_first_of("#;"); pos != std::string::npos)
                line.erase(pos);
            std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
                section = trim(t.substr(1, t.size() - 2));
                if (section.empty())
                    throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            std::string full = section.empty() ? key : section + "." + key;
            if (cf.values_.count(full))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + full);
            cf.values_[full] = value;
        }
        return cf;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file: " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing key " + key);
        consumed_.insert(key);
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        return it->second;
    }

    /// Every key must have been consumed by a typed reader; leftovers are
    /// almost always typos and abort the run before it starts.
    void reject_unconsumed() const {
        std::vector<std::string> bad;
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) bad.push_back(k);
        if (!bad.empty()) {
            std::string msg = "unknown config key(s):";
            for (const auto& k : bad) msg += " " + k;
            throw ConfigError(msg);
        }
    }

    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + s + "'");
}

inline double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
}

inline std::int64_t parse_int(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = ConfigFile::trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, key));
    }
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated number list");
    return out;
}

/// Full experiment description: one sweep over lambda x W x runs.
struct ExperimentConfig {
    // [topology]
    std::string topology_path;
    std::int64_t cache_bytes = 0;   // default store size; `cache` lines override
    double capacity_scale = 1.0;

    // [traffic]
    std::vector<double> lambda{1.0};
    double zipf_exponent = 0.75;
    int catalog_size = 100;
    double arrival_truncation_factor = 50.0;
    std::vector<int> requesting_nodes; // empty = all nodes

    // [virtual_plane]
    BiasKind bias_kind = BiasKind::min_next_hop;
    double bias_z = 1.0;
    double bias_hop_cost = 1.0;
    double cache_rate_r = -1.0;     // <0: auto, floor(L_n / D) per node
    bool cache_bias_enabled = true;
    std::string backlog_trace;      // path prefix, empty = off

    // [congestion]
    bool congestion_enabled = false;
    std::vector<double> w{1.0};
    double alpha_max_factor = 10.0;
    double q_max_factor = 1000.0;
    std::string utility = "alpha_fair_2";

    // [actual_plane]
    bool actual_plane_enabled = true;
    int flow_window = 100;
    bool flow_ewma = false;
    bool strict_cache_placement = false;
    int chunks_per_object = 1;
    int interest_size_bytes = 125;
    int data_size_bytes = 50000;

    // [baselines]
    double lfu_decay = 0.99;
    int lfu_decay_interval = 100;
    double lce_bias_base = 1.0;
    double random_insert_prob = 0.5;
    int potential_refresh = 100;

    // [run]
    Algorithm algorithm = Algorithm::evip;
    int slots = 10000;
    int runs = 10;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency

    static ExperimentConfig from_file(const std::string& path) {
        return from_config(ConfigFile::parse_file(path));
    }

    static ExperimentConfig from_config(const ConfigFile& cf) {
        ExperimentConfig c;
        c.topology_path = cf.get_or("topology.path", c.topology_path);
        if (cf.has("topology.cache_bytes"))
            c.cache_bytes = parse_int(cf.get("topology.cache_bytes"), "topology.cache_bytes");
        if (cf.has("topology.capacity_scale"))
            c.capacity_scale = parse_double(cf.get("topology.capacity_scale"), "topology.capacity_scale");

        if (cf.has("traffic.lambda"))
            c.lambda = parse_double_list(cf.get("traffic.lambda"), "traffic.lambda");
        if (cf.has("traffic.zipf_exponent"))
            c.zipf_exponent = parse_double(cf.get("traffic.zipf_exponent"), "traffic.zipf_exponent");
        if (cf.has("traffic.catalog_size"))
            c.catalog_size = static_cast<int>(parse_int(cf.get("traffic.catalog_size"), "traffic.catalog_size"));
        if (cf.has("traffic.arrival_truncation_factor"))
            c.arrival_truncation_factor = parse_double(cf.get("traffic.arrival_truncation_factor"),
                                                       "traffic.arrival_truncation_factor");
        if (cf.has("traffic.requesting_nodes")) {
            std::string v = cf.get("traffic.requesting_nodes");
            if (v != "all") {
                for (double d : parse_double_list(v, "traffic.requesting_nodes"))
                    c.requesting_nodes.push_back(static_cast<int>(d));
            }
        }
        if (cf.has("traffic.seed")) // alias of run.seed, kept with the traffic keys
            c.seed = static_cast<std::uint64_t>(parse_int(cf.get("traffic.seed"), "traffic.seed"));

        if (cf.has("virtual_plane.bias_kind")) {
            std::string v = cf.get("virtual_plane.bias_kind");
            if (v == "none") c.bias_kind = BiasKind::none;
            else if (v == "min_next_hop") c.bias_kind = BiasKind::min_next_hop;
            else if (v == "shortest_path_cost") c.bias_kind = BiasKind::shortest_path_cost;
            else throw ConfigError("virtual_plane.bias_kind: unknown kind '" + v + "'");
        }
        if (cf.has("virtual_plane.bias_z"))
            c.bias_z = parse_double(cf.get("virtual_plane.bias_z"), "virtual_plane.bias_z");
        if (cf.has("virtual_plane.bias_hop_cost"))
            c.bias_hop_cost = parse_double(cf.get("virtual_plane.bias_hop_cost"), "virtual_plane.bias_hop_cost");
        if (cf.has("virtual_plane.cache_rate_r")) {
            std::string v = cf.get("virtual_plane.cache_rate_r");
            c.cache_rate_r = v == "auto" ? -1.0 : parse_double(v, "virtual_plane.cache_rate_r");
        }
        if (cf.has("virtual_plane.cache_bias_enabled"))
            c.cache_bias_enabled = parse_bool(cf.get("virtual_plane.cache_bias_enabled"),
                                              "virtual_plane.cache_bias_enabled");
        c.backlog_trace = cf.get_or("virtual_plane.backlog_trace", "");

        if (cf.has("congestion.congestion_enabled"))
            c.congestion_enabled = parse_bool(cf.get("congestion.congestion_enabled"),
                                              "congestion.congestion_enabled");
        if (cf.has("congestion.W"))
            c.w = parse_double_list(cf.get("congestion.W"), "congestion.W");
        if (cf.has("congestion.alpha_max_factor"))
            c.alpha_max_factor = parse_double(cf.get("congestion.alpha_max_factor"),
                                              "congestion.alpha_max_factor");
        if (cf.has("congestion.q_max_factor"))
            c.q_max_factor = parse_double(cf.get("congestion.q_max_factor"), "congestion.q_max_factor");
        if (cf.has("congestion.utility")) {
            c.utility = cf.get("congestion.utility");
            if (c.utility != "alpha_fair_2")
                throw ConfigError("congestion.utility: only 'alpha_fair_2' is built in; "
                                  "custom utilities plug in through the library API");
        }

        if (cf.has("actual_plane.enabled"))
            c.actual_plane_enabled = parse_bool(cf.get("actual_plane.enabled"), "actual_plane.enabled");
        if (cf.has("actual_plane.flow_window"))
            c.flow_window = static_cast<int>(parse_int(cf.get("actual_plane.flow_window"),
                                                       "actual_plane.flow_window"));
        if (cf.has("actual_plane.flow_ewma"))
            c.flow_ewma = parse_bool(cf.get("actual_plane.flow_ewma"), "actual_plane.flow_ewma");
        if (cf.has("actual_plane.strict_cache_placement"))
            c.strict_cache_placement = parse_bool(cf.get("actual_plane.strict_cache_placement"),
                                                  "actual_plane.strict_cache_placement");
        if (cf.has("actual_plane.chunks_per_object"))
            c.chunks_per_object = static_cast<int>(parse_int(cf.get("actual_plane.chunks_per_object"),
                                                             "actual_plane.chunks_per_object"));
        if (cf.has("actual_plane.interest_size_bytes"))
            c.interest_size_bytes = static_cast<int>(parse_int(cf.get("actual_plane.interest_size_bytes"),
                                                               "actual_plane.interest_size_bytes"));
        if (cf.has("actual_plane.data_size_bytes"))
            c.data_size_bytes = static_cast<int>(parse_int(cf.get("actual_plane.data_size_bytes"),
                                                           "actual_plane.data_size_bytes"));

        if (cf.has("baselines.lfu_decay"))
            c.lfu_decay = parse_double(cf.get("baselines.lfu_decay"), "baselines.lfu_decay");
        if (cf.has("baselines.lfu_decay_interval"))
            c.lfu_decay_interval = static_cast<int>(parse_int(cf.get("baselines.lfu_decay_interval"),
                                                              "baselines.lfu_decay_interval"));
        if (cf.has("baselines.lce_bias_base"))
            c.lce_bias_base = parse_double(cf.get("baselines.lce_bias_base"), "baselines.lce_bias_base");
        if (cf.has("baselines.random_insert_prob"))
            c.random_insert_prob = parse_double(cf.get("baselines.random_insert_prob"),
                                                "baselines.random_insert_prob");
        if (cf.has("baselines.potential_refresh"))
            c.potential_refresh = static_cast<int>(parse_int(cf.get("baselines.potential_refresh"),
                                                             "baselines.potential_refresh"));

        if (cf.has("run.algorithm")) c.algorithm = parse_algorithm(cf.get("run.algorithm"));
        if (cf.has("run.slots"))
            c.slots = static_cast<int>(parse_int(cf.get("run.slots"), "run.slots"));
        if (cf.has("run.runs"))
            c.runs = static_cast<int>(parse_int(cf.get("run.runs"), "run.runs"));
        if (cf.has("run.seed")) {
            if (cf.has("traffic.seed"))
                throw ConfigError("seed set under both [traffic] and [run]; pick one");
            c.seed = static_cast<std::uint64_t>(parse_int(cf.get("run.seed"), "run.seed"));
        }
        if (cf.has("run.threads"))
            c.threads = static_cast<int>(parse_int(cf.get("run.threads"), "run.threads"));

        cf.reject_unconsumed();
        c.validate();
        return c;
    }

    void validate() const {
        if (catalog_size < 1) throw ConfigError("traffic.catalog_size must be >= 1");
        if (zipf_exponent < 0) throw ConfigError("traffic.zipf_exponent must be >= 0");
        for (double l : lambda)
            if (l < 0) throw ConfigError("traffic.lambda entries must be >= 0");
        if (arrival_truncation_factor <= 0)
            throw ConfigError("traffic.arrival_truncation_factor must be > 0");
        if (bias_z <= 0) throw ConfigError("virtual_plane.bias_z must be > 0");
        for (double x : w)
            if (x <= 0) throw ConfigError("congestion.W entries must be > 0");
        if (alpha_max_factor <= 0) throw ConfigError("congestion.alpha_max_factor must be > 0");
        if (q_max_factor <= 0) throw ConfigError("congestion.q_max_factor must be > 0");
        if (chunks_per_object < 1) throw ConfigError("actual_plane.chunks_per_object must be >= 1");
        if (flow_window < 1) throw ConfigError("actual_plane.flow_window must be >= 1");
        if (interest_size_bytes < 1) throw ConfigError("actual_plane.interest_size_bytes must be >= 1");
        if (data_size_bytes < 1) throw ConfigError("actual_plane.data_size_bytes must be >= 1");
        if (slots < 1) throw ConfigError("run.slots must be >= 1");
        if (runs < 1) throw ConfigError("run.runs must be >= 1");
        if (threads < 0) throw ConfigError("run.threads must be >= 0");
    }

    Catalog make_catalog() const {
        return Catalog::make(catalog_size, data_size_bytes, chunks_per_object);
    }

    BiasSpec make_bias(Algorithm algo) const {
        BiasSpec b;
        b.kind = algo == Algorithm::vip ? BiasKind::none : bias_kind;
        b.z = bias_z;
        b.hop_cost = bias_hop_cost;
        return b;
    }
};

} // namespace vipsim

#endif
