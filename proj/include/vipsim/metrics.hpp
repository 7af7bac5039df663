#ifndef VIPSIM_METRICS_HPP_
#define VIPSIM_METRICS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vipsim/congestion.hpp"
#include "vipsim/matrix.hpp"
#include "vipsim/topology.hpp"

namespace vipsim {

struct DelayRecord {
    int origin;
    int object;
    int creation_slot;
    int fulfillment_slot;
};

/// Everything one run accumulates.
struct RunMetrics {
    bool record_delays = true;
    std::vector<DelayRecord> delay_records;
    std::uint64_t requests_issued = 0;
    std::uint64_t requests_completed = 0;
    std::uint64_t requests_dropped = 0;
    double total_delay = 0;

    std::vector<double> backlog_series;      // per-slot sum of all VIP counters
    NodeObjectMatrix<double> admitted_total; // cumulative admitted (or arrived) demand
    NodeObjectMatrix<double> arrival_total;
    int slots = 0;

    double transport_drops = 0;
    std::uint64_t stale_data = 0;
    std::uint64_t unroutable = 0;
    std::uint64_t truncated_arrivals = 0;

    void init(int nodes, int objects) {
        admitted_total = NodeObjectMatrix<double>(nodes, objects);
        arrival_total = NodeObjectMatrix<double>(nodes, objects);
    }

    void note_completion(int origin, int object, int creation, int fulfillment) {
        ++requests_completed;
        total_delay += fulfillment - creation;
        if (record_delays)
            delay_records.push_back({origin, object, creation, fulfillment});
    }
};

/// Least-squares slope over the last 10% of the series (at least 2 points).
inline double tail_slope(const std::vector<double>& series) {
    std::size_t n = series.size();
    if (n < 2) return 0.0;
    std::size_t window = std::max<std::size_t>(n / 10, 2);
    std::size_t start = n - window;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < n; ++i) {
        double x = static_cast<double>(i - start), y = series[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(window);
    double denom = m * sxx - sx * sx;
    return denom == 0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

/// One CSV row. Utility is evaluated on time-averaged admissions, restricted
/// to (node, object) pairs that saw demand at all.
struct Summary {
    std::string algorithm;
    std::string topology;
    double lambda = 0;
    double w = 0;
    double z = 0;
    std::uint64_t seed = 0;
    int slots = 0;
    double total_delay = 0;
    double mean_delay = 0;
    double sum_utility = 0;
    double mean_backlog = 0;
    double backlog_slope = 0;
    double drops = 0;
    std::uint64_t stale = 0;
    std::uint64_t unroutable = 0;
    bool empty_warning = false;
    bool failed = false;
    std::string failure;
};

inline double achieved_utility(const RunMetrics& m, const UtilityFunction& g) {
    if (m.slots <= 0) return 0.0;
    double u = 0;
    for (int n = 0; n < m.admitted_total.nodes(); ++n)
        for (int k = 0; k < m.admitted_total.objects(); ++k) {
            if (m.arrival_total(n, k) <= 0) continue;
            u += g(m.admitted_total(n, k) / m.slots);
        }
    return u;
}

inline Summary summarize(const RunMetrics& m, const UtilityFunction& g) {
    Summary s;
    s.slots = m.slots;
    s.total_delay = m.total_delay;
    s.mean_delay = m.requests_completed > 0 ? m.total_delay / m.requests_completed : 0.0;
    s.empty_warning = m.requests_completed == 0;
    s.sum_utility = achieved_utility(m, g);
    if (!m.backlog_series.empty()) {
        double acc = 0;
        for (double x : m.backlog_series) acc += x;
        s.mean_backlog = acc / m.backlog_series.size();
        s.backlog_slope = tail_slope(m.backlog_series);
    }
    s.drops = m.transport_drops + static_cast<double>(m.requests_dropped);
    s.stale = m.stale_data;
    s.unroutable = m.unroutable;
    return s;
}

/// Constants entering the queue-backlog and utility-gap bounds; reported as
/// run diagnostics.
struct DriftConstants {
    double b = 0;     // forwarding/caching drift constant
    double b_hat = 0; // congestion-control drift constant
    double g_max = 0; // sum utility at the admission burst bounds
    double c_max = 0; // largest normalized link capacity
    double r_max = 0;
    std::vector<double> mu_in_max;      // per node, objects/slot
    std::vector<double> mu_out_max;     // per node, objects/slot
    std::vector<double> arrival_bound;  // per node, summed over objects
    std::vector<double> alpha_bound;    // per node, summed over objects
};

/// B      = (1/2N) sum_n [ mu_out^2 + (A_max + mu_in + K r_n)^2 + 2 mu_out K r_n ]
/// B_hat  = (1/2N) sum_n [ mu_out^2 + (alpha_max + mu_in + K r_n)^2
///                         + 2 alpha_max^2 + 2 mu_out K r_n ]
/// G_max  = sum_{n,k} g(alpha_max_k)
inline DriftConstants compute_drift_constants(const Topology& topo, const Catalog& cat,
                                              double arrival_bound_per_pair,
                                              const std::vector<double>& alpha_max_per_object,
                                              const std::vector<double>& cache_rates,
                                              const UtilityFunction& g) {
    int nodes = topo.node_count();
    int objects = cat.object_count;
    double d = static_cast<double>(cat.object_size_bits);
    DriftConstants c;
    c.mu_in_max.assign(nodes, 0);
    c.mu_out_max.assign(nodes, 0);
    c.arrival_bound.assign(nodes, arrival_bound_per_pair * objects);
    double alpha_node = 0;
    for (double a : alpha_max_per_object) alpha_node += a;
    c.alpha_bound.assign(nodes, alpha_node);
    for (int lid = 0; lid < topo.link_count(); ++lid) {
        const Link& l = topo.link(lid);
        c.mu_out_max[l.from] += l.capacity_bits / d;
        c.mu_in_max[l.to] += l.capacity_bits / d;
    }
    c.c_max = topo.max_normalized_capacity(cat);
    for (int n = 0; n < nodes; ++n) {
        c.r_max = std::max(c.r_max, cache_rates[n]);
        double kr = objects * cache_rates[n];
        double out2 = c.mu_out_max[n] * c.mu_out_max[n];
        double cross = 2.0 * c.mu_out_max[n] * kr;
        double in_a = c.arrival_bound[n] + c.mu_in_max[n] + kr;
        double in_alpha = c.alpha_bound[n] + c.mu_in_max[n] + kr;
        c.b += out2 + in_a * in_a + cross;
        c.b_hat += out2 + in_alpha * in_alpha + 2.0 * c.alpha_bound[n] * c.alpha_bound[n] + cross;
    }
    c.b /= 2.0 * nodes;
    c.b_hat /= 2.0 * nodes;
    for (int n = 0; n < nodes; ++n)
        for (int k = 0; k < objects; ++k) c.g_max += g(alpha_max_per_object[k]);
    return c;
}

} // namespace vipsim

#endif
