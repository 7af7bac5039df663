// vipsim: discrete-time simulator for virtual-plane (VIP) forwarding and
// caching in named-data networks, with congestion control, a packet-level
// plane and a set of classical baselines.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vipsim/vipsim.hpp"

namespace {

struct Overrides {
    std::string topology;
    std::string algorithm;
    std::string lambda;
    std::string w;
    double z = -1.0;
    int slots = -1;
    int runs = -1;
    long long seed = -1;
};

void apply(const Overrides& o, vipsim::ExperimentConfig& cfg) {
    if (!o.topology.empty()) cfg.topology_path = o.topology;
    if (!o.algorithm.empty()) cfg.algorithm = vipsim::parse_algorithm(o.algorithm);
    if (!o.lambda.empty()) cfg.lambda = vipsim::parse_double_list(o.lambda, "--lambda");
    if (!o.w.empty()) {
        cfg.w = vipsim::parse_double_list(o.w, "--W");
        if (!cfg.congestion_enabled)
            std::cerr << "note: --W given but congestion control is disabled in the config"
                      << std::endl;
    }
    if (o.z > 0) cfg.bias_z = o.z;
    if (o.slots > 0) cfg.slots = o.slots;
    if (o.runs > 0) cfg.runs = o.runs;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    cfg.validate();
}

int cmd_run(const std::string& config_path, const Overrides& o, const std::string& out_path) {
    vipsim::ExperimentConfig cfg = vipsim::ExperimentConfig::from_file(config_path);
    apply(o, cfg);
    std::vector<vipsim::Summary> rows = vipsim::run_experiment(cfg, &std::cerr);
    vipsim::write_csv_file(out_path, rows);
    std::cerr << "wrote " << rows.size() << " row(s) to " << out_path << std::endl;
    for (const auto& r : rows)
        if (r.failed) return 2;
    return 0;
}

int cmd_constants(const std::string& config_path, const Overrides& o) {
    vipsim::ExperimentConfig cfg = vipsim::ExperimentConfig::from_file(config_path);
    apply(o, cfg);
    if (cfg.topology_path.empty())
        throw vipsim::ConfigError("no topology file given (topology.path or --topology)");
    vipsim::Topology topo =
        vipsim::Topology::parse_file(cfg.topology_path, cfg.cache_bytes, cfg.capacity_scale);
    vipsim::Catalog cat = cfg.make_catalog();
    topo.validate_against(cat);
    vipsim::PopularityModel pop = vipsim::PopularityModel::zipf(cfg.catalog_size, cfg.zipf_exponent);

    double lambda = cfg.lambda.front();
    if (cfg.lambda.size() > 1)
        std::cerr << "note: multiple lambda values; constants use lambda = " << lambda
                  << std::endl;
    double per_pair_bound =
        std::ceil(cfg.arrival_truncation_factor * lambda * pop.p.front());
    std::vector<double> alpha_max =
        vipsim::default_alpha_max(pop, lambda, cfg.alpha_max_factor);
    std::vector<double> rates;
    if (cfg.cache_rate_r < 0)
        rates = vipsim::default_cache_rates(topo, cat);
    else
        rates.assign(topo.node_count(), cfg.cache_rate_r);

    vipsim::DriftConstants dc = vipsim::compute_drift_constants(
        topo, cat, per_pair_bound, alpha_max, rates, vipsim::UtilityFunction::alpha_fair_2());

    std::printf("topology        = %s\n", cfg.topology_path.c_str());
    std::printf("nodes           = %d\n", topo.node_count());
    std::printf("links           = %d\n", topo.link_count());
    std::printf("objects         = %d\n", cat.object_count);
    std::printf("lambda          = %.6g\n", lambda);
    std::printf("B               = %.10g\n", dc.b);
    std::printf("B_hat           = %.10g\n", dc.b_hat);
    std::printf("G_max           = %.10g\n", dc.g_max);
    std::printf("C_max           = %.10g\n", dc.c_max);
    std::printf("r_max           = %.10g\n", dc.r_max);
    for (int n = 0; n < topo.node_count(); ++n)
        std::printf("node %-3d mu_in = %-10.6g mu_out = %-10.6g A_bound = %-10.6g "
                    "alpha_bound = %.6g\n",
                    n, dc.mu_in_max[n], dc.mu_out_max[n], dc.arrival_bound[n],
                    dc.alpha_bound[n]);
    return 0;
}

int cmd_validate(const std::string& topology_path) {
    vipsim::Topology topo = vipsim::Topology::parse_file(topology_path);
    vipsim::ShortestPaths paths(topo);
    std::printf("nodes           = %d\n", topo.node_count());
    std::printf("directed links  = %d\n", topo.link_count());
    std::printf("connected       = %s\n", paths.connected() ? "yes" : "no");
    double cache_min = 0, cache_max = 0;
    for (int n = 0; n < topo.node_count(); ++n) {
        double b = topo.cache_bits(n) / 8.0;
        if (n == 0) cache_min = cache_max = b;
        cache_min = std::min(cache_min, b);
        cache_max = std::max(cache_max, b);
    }
    std::printf("cache bytes     = [%.6g, %.6g]\n", cache_min, cache_max);
    if (!paths.connected())
        std::cerr << "warning: topology is not strongly connected; runs will refuse it"
                  << std::endl;
    std::printf("ok\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VIP virtual-plane forwarding/caching simulator"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_path, out_path, topology_path;

    CLI::App* run = app.add_subcommand("run", "run an experiment sweep and write CSV");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--topology", o.topology, "override topology file");
    run->add_option("--algorithm", o.algorithm,
                    "override algorithm (evip, vip, sp_lfu, sp_lce_unif, sp_lce_lru, "
                    "sp_lcd_lru, sp_lce_bias, potential_random)");
    run->add_option("--lambda", o.lambda, "override arrival-rate sweep, comma separated");
    run->add_option("--W", o.w, "override utility-weight sweep, comma separated");
    run->add_option("--z", o.z, "override bias normalizer z");
    run->add_option("--slots", o.slots, "override slots per run");
    run->add_option("--runs", o.runs, "override runs per sweep point");
    run->add_option("--seed", o.seed, "override master seed");
    run->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* constants = app.add_subcommand("constants", "print drift-constant diagnostics");
    constants->add_option("--config", config_path, "experiment config file")->required();
    constants->add_option("--topology", o.topology, "override topology file");

    CLI::App* validate = app.add_subcommand("validate", "parse and check a topology file");
    validate->add_option("--topology", topology_path, "topology file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, o, out_path);
        if (constants->parsed()) return cmd_constants(config_path, o);
        if (validate->parsed()) return cmd_validate(topology_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
