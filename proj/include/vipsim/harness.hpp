#ifndef VIPSIM_HARNESS_HPP_
#define VIPSIM_HARNESS_HPP_

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "vipsim/config.hpp"
#include "vipsim/metrics.hpp"
#include "vipsim/simulation.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/traffic.hpp"

namespace vipsim {

/// Runs the full lambda x W x runs sweep. Jobs execute on a small pool (runs
/// share nothing mutable) and results come back in deterministic job order.
inline std::vector<Summary> run_experiment(const ExperimentConfig& cfg,
                                           std::ostream* progress = nullptr) {
    if (cfg.topology_path.empty())
        throw ConfigError("no topology file given (topology.path or --topology)");
    Topology topo = Topology::parse_file(cfg.topology_path, cfg.cache_bytes, cfg.capacity_scale);
    Catalog cat = cfg.make_catalog();
    topo.validate_against(cat);
    PopularityModel pop = PopularityModel::zipf(cfg.catalog_size, cfg.zipf_exponent);
    ShortestPaths paths(topo);
    if (!paths.connected())
        throw std::runtime_error("topology is not strongly connected");

    std::string name = cfg.topology_path;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    auto dot = name.rfind(".txt");
    if (dot != std::string::npos && dot == name.size() - 4) name = name.substr(0, dot);

    RunInputs in;
    in.cfg = &cfg;
    in.topo = &topo;
    in.cat = &cat;
    in.pop = &pop;
    in.paths = &paths;
    in.topology_name = name;

    std::vector<double> w_values = cfg.congestion_enabled ? cfg.w : std::vector<double>{1.0};
    std::vector<RunParams> jobs;
    for (double lambda : cfg.lambda)
        for (double w : w_values)
            for (int r = 0; r < cfg.runs; ++r)
                jobs.push_back({cfg.algorithm, lambda, w, r});

    std::vector<Summary> results(jobs.size());
    unsigned pool = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    pool = std::min<unsigned>(pool, static_cast<unsigned>(jobs.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            SimulationRun run(in, jobs[i]);
            results[i] = run.execute();
            if (progress != nullptr) {
                static std::mutex mu;
                std::lock_guard<std::mutex> lock(mu);
                const Summary& s = results[i];
                *progress << "run " << (i + 1) << "/" << jobs.size() << " " << s.algorithm
                          << " lambda=" << s.lambda;
                if (cfg.congestion_enabled) *progress << " W=" << s.w;
                if (s.failed)
                    *progress << " FAILED: " << s.failure;
                else
                    *progress << " mean_delay=" << s.mean_delay
                              << " mean_backlog=" << s.mean_backlog;
                *progress << std::endl;
            }
        }
    };
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return results;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const char* csv_header() {
    return "algorithm,topology,lambda,W,z,seed,slots,total_delay,mean_delay,"
           "sum_utility,mean_backlog,backlog_slope,drops,stale,unroutable";
}

inline std::string csv_row(const Summary& s) {
    std::string row = s.algorithm + "," + s.topology + "," + format_double(s.lambda) + "," +
                      format_double(s.w) + "," + format_double(s.z) + "," +
                      std::to_string(s.seed) + "," + std::to_string(s.slots);
    if (s.failed) {
        // numeric fields stay empty so a failed run can't be mistaken for data
        row += ",,,,,,,,";
    } else {
        row += "," + format_double(s.total_delay) + "," + format_double(s.mean_delay) + "," +
               format_double(s.sum_utility) + "," + format_double(s.mean_backlog) + "," +
               format_double(s.backlog_slope) + "," + format_double(s.drops) + "," +
               std::to_string(s.stale) + "," + std::to_string(s.unroutable);
    }
    return row;
}

/// Writes the sweep to CSV. An empty result set still produces the header but
/// warns on stderr; failed runs keep their echo columns and empty metrics.
inline void write_csv(std::ostream& out, const std::vector<Summary>& rows) {
    out << csv_header() << "\n";
    for (const Summary& s : rows) out << csv_row(s) << "\n";
    if (rows.empty())
        std::cerr << "warning: experiment produced no rows; CSV has header only" << std::endl;
    for (const Summary& s : rows)
        if (s.failed)
            std::cerr << "warning: run (algorithm=" << s.algorithm << " lambda=" << s.lambda
                      << " W=" << s.w << " seed=" << s.seed << ") failed: " << s.failure
                      << std::endl;
}

inline void write_csv_file(const std::string& path, const std::vector<Summary>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    write_csv(f, rows);
}

} // namespace vipsim

#endif
