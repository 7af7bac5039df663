#ifndef VIPSIM_SIMULATION_HPP_
#define VIPSIM_SIMULATION_HPP_

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vipsim/actual_plane.hpp"
#include "vipsim/baselines.hpp"
#include "vipsim/config.hpp"
#include "vipsim/congestion.hpp"
#include "vipsim/metrics.hpp"
#include "vipsim/rng.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/traffic.hpp"
#include "vipsim/virtual_plane.hpp"

namespace vipsim {

/// Immutable inputs shared by every run of a sweep.
struct RunInputs {
    const ExperimentConfig* cfg = nullptr;
    const Topology* topo = nullptr;
    const Catalog* cat = nullptr;
    const PopularityModel* pop = nullptr;
    const ShortestPaths* paths = nullptr;
    std::string topology_name;
};

struct RunParams {
    Algorithm algorithm = Algorithm::evip;
    double lambda = 1.0;
    double w = 1.0;
    int run_index = 0;
};

/// Seed for one run of a sweep. Run 0 reuses the master seed unchanged so a
/// row from a multi-run sweep can be reproduced with --seed <row seed> --runs 1.
inline std::uint64_t run_seed_for(std::uint64_t master, int run_index) {
    return run_index == 0 ? master : derive_seed(master, static_cast<std::uint64_t>(run_index));
}

/// One (algorithm, lambda, W, seed) simulation: virtual plane, optional
/// congestion control, optional packet plane, metrics. Not copyable; the
/// engines hold references into this object.
class SimulationRun {
public:
    SimulationRun(const RunInputs& in, const RunParams& p) : in_(in), p_(p) {}
    SimulationRun(const SimulationRun&) = delete;
    SimulationRun& operator=(const SimulationRun&) = delete;

    Summary execute() {
        Summary s;
        s.algorithm = algorithm_name(p_.algorithm);
        s.topology = in_.topology_name;
        s.lambda = p_.lambda;
        s.w = in_.cfg->congestion_enabled ? p_.w : 0.0;
        s.z = in_.cfg->make_bias(p_.algorithm).kind == BiasKind::none ? 0.0 : in_.cfg->bias_z;
        s.seed = run_seed_for(in_.cfg->seed, p_.run_index);
        s.slots = in_.cfg->slots;
        try {
            simulate(s.seed);
            Summary filled = summarize(metrics_, utility_);
            filled.algorithm = s.algorithm;
            filled.topology = s.topology;
            filled.lambda = s.lambda;
            filled.w = s.w;
            filled.z = s.z;
            filled.seed = s.seed;
            filled.slots = s.slots;
            return filled;
        } catch (const std::exception& e) {
            s.failed = true;
            s.failure = e.what();
            return s;
        }
    }

    const RunMetrics& metrics() const { return metrics_; }
    const VirtualPlaneEngine* virtual_plane() const { return vp_ ? &*vp_ : nullptr; }
    const CongestionEngine* congestion() const { return cc_ ? &*cc_ : nullptr; }
    const ActualPlaneEngine* actual_plane() const { return ap_ ? &*ap_ : nullptr; }
    const std::vector<int>& sources() const { return sources_; }

private:
    void simulate(std::uint64_t run_seed) {
        const ExperimentConfig& cfg = *in_.cfg;
        const Topology& topo = *in_.topo;
        const Catalog& cat = *in_.cat;
        int nodes = topo.node_count();
        int objects = cat.object_count;

        sources_ = assign_sources(topo, cat, derive_seed(run_seed, kStreamSources));
        std::vector<int> requesting =
            cfg.requesting_nodes.empty() ? all_nodes(topo) : cfg.requesting_nodes;
        for (int n : requesting)
            if (n < 0 || n >= nodes)
                throw ConfigError("traffic.requesting_nodes: node " + std::to_string(n) +
                                  " out of range");
        ArrivalGenerator gen(topo, cat, *in_.pop, sources_, p_.lambda, requesting,
                             cfg.arrival_truncation_factor, run_seed);

        metrics_.init(nodes, objects);
        bool vip_family = is_vip_family(p_.algorithm);
        bool use_cc = vip_family && cfg.congestion_enabled;

        if (vip_family) {
            ctx_.emplace(BiasContext{topo, cat, sources_, in_.paths});
            std::vector<double> rates;
            if (cfg.cache_rate_r < 0) {
                rates = default_cache_rates(topo, cat);
            } else {
                rates.assign(nodes, cfg.cache_rate_r);
            }
            vp_.emplace(*ctx_, cfg.make_bias(p_.algorithm), cfg.cache_bias_enabled, rates);
            if (use_cc)
                cc_.emplace(topo, cat, *in_.pop, p_.lambda, p_.w, cfg.alpha_max_factor,
                            cfg.q_max_factor, UtilityFunction::alpha_fair_2());
        }
        if (cfg.actual_plane_enabled) {
            ActualPlaneOptions opt;
            opt.interest_size_bytes = cfg.interest_size_bytes;
            opt.flow_window = cfg.flow_window;
            opt.flow_ewma = cfg.flow_ewma;
            opt.strict_placement = cfg.strict_cache_placement;
            opt.potential_refresh = cfg.potential_refresh;
            opt.lce_bias_base = cfg.lce_bias_base;
            opt.random_insert_prob = cfg.random_insert_prob;
            opt.lfu_decay = cfg.lfu_decay;
            opt.lfu_decay_interval = cfg.lfu_decay_interval;
            opt.policy_seed = derive_seed(run_seed, kStreamPolicy);
            ap_.emplace(topo, cat, sources_, *in_.paths, p_.algorithm, opt, &metrics_);
        }

        std::ofstream trace;
        if (vip_family && !cfg.backlog_trace.empty()) {
            trace.open(trace_path(cfg.backlog_trace));
            if (!trace) throw std::runtime_error("cannot open backlog trace file");
            trace << "slot,total_vip\n";
        }

        NodeObjectMatrix<double> inflow(nodes, objects);
        for (int t = 0; t < cfg.slots; ++t) {
            const ArrivalBatch& arrivals = gen.next_slot();
            const NodeObjectMatrix<double>* admissions = nullptr;
            if (vip_family) {
                if (use_cc) {
                    admissions = &cc_->step(vp_->state().counts, arrivals);
                    add_into(metrics_.admitted_total, *admissions);
                    vp_->step(*admissions);
                } else {
                    for (int n = 0; n < nodes; ++n)
                        for (int k = 0; k < objects; ++k)
                            inflow(n, k) = arrivals(n, k);
                    add_into(metrics_.admitted_total, inflow);
                    vp_->step(inflow);
                }
                metrics_.backlog_series.push_back(vp_->state().total());
                if (trace.is_open())
                    trace << t << ',' << metrics_.backlog_series.back() << '\n';
            } else {
                add_into(metrics_.admitted_total, arrivals);
            }
            add_into(metrics_.arrival_total, arrivals);
            if (ap_) {
                ap_->step(t, arrivals, vip_family ? &vp_->last_shipped() : nullptr,
                          vip_family ? &vp_->last_cache() : nullptr,
                          admissions, use_cc ? &cc_->q_max() : nullptr);
                if ((t + 1) % 1000 == 0) check_conservation();
            }
            metrics_.slots = t + 1;
        }
        if (ap_) check_conservation();
        if (use_cc) metrics_.transport_drops = cc_->dropped();
        metrics_.truncated_arrivals = gen.truncated();
    }

    template <typename T>
    static void add_into(NodeObjectMatrix<double>& acc, const NodeObjectMatrix<T>& x) {
        for (int n = 0; n < acc.nodes(); ++n)
            for (int k = 0; k < acc.objects(); ++k) acc(n, k) += x(n, k);
    }

    void check_conservation() const {
        std::uint64_t accounted = metrics_.requests_completed + metrics_.requests_dropped +
                                  static_cast<std::uint64_t>(ap_->outstanding());
        if (metrics_.requests_issued != accounted)
            throw std::logic_error("request conservation violated: issued " +
                                   std::to_string(metrics_.requests_issued) + " != accounted " +
                                   std::to_string(accounted));
    }

    std::string trace_path(const std::string& prefix) const {
        std::ostringstream p;
        p << prefix << '.' << algorithm_name(p_.algorithm) << ".lam" << p_.lambda;
        if (in_.cfg->congestion_enabled) p << ".W" << p_.w;
        p << ".run" << p_.run_index << ".csv";
        return p.str();
    }

    RunInputs in_;
    RunParams p_;
    RunMetrics metrics_;
    UtilityFunction utility_ = UtilityFunction::alpha_fair_2();
    std::vector<int> sources_;
    std::optional<BiasContext> ctx_;
    std::optional<VirtualPlaneEngine> vp_;
    std::optional<CongestionEngine> cc_;
    std::optional<ActualPlaneEngine> ap_;
};

} // namespace vipsim

#endif
