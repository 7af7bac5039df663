#ifndef VIPSIM_VIRTUAL_PLANE_HPP_
#define VIPSIM_VIRTUAL_PLANE_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vipsim/matrix.hpp"
#include "vipsim/topology.hpp"

namespace vipsim {

/// Demand counters V_n^k(t), one per (node, object). Counts are real valued
/// and non-negative; a source's counter stays pinned at zero.
struct VipState {
    NodeObjectMatrix<double> counts;
    int slot = 0;

    VipState() = default;
    VipState(int nodes, int objects) : counts(nodes, objects) {}
    double total() const { return counts.sum(); }
};

enum class BiasKind {
    none,               // bias identically zero (normalizer pushed to infinity)
    min_next_hop,       // (1/z) * smallest counter among permitted next hops
    shortest_path_cost, // constant per-hop cost toward the object's source
    custom_table,       // general weighted combination, caller supplied
};

struct EtaEntry {
    int neighbor;
    double eta; // in [0, 1]
    double z;   // > 0
};

/// Sparse form of the general count-weighted bias: for each (node, object),
/// the list of neighboring counters entering the bias with weight eta/z.
/// No built-in constructor; callers assemble it directly.
struct EtaTable {
    int objects = 0;
    std::vector<std::vector<EtaEntry>> contributions; // [n * objects + k]

    const std::vector<EtaEntry>& at(int n, int k) const {
        return contributions[static_cast<std::size_t>(n) * objects + k];
    }
};

struct BiasSpec {
    BiasKind kind = BiasKind::none;
    double z = 1.0;        // min_next_hop normalizer
    double hop_cost = 1.0; // shortest_path_cost per-hop constant
    std::shared_ptr<const EtaTable> table;

    void check() const {
        if (kind == BiasKind::min_next_hop && z <= 0)
            throw std::invalid_argument("bias: z must be > 0");
        if (kind == BiasKind::custom_table) {
            if (!table) throw std::invalid_argument("bias: custom_table requires a table");
            for (const auto& list : table->contributions)
                for (const auto& e : list) {
                    if (e.eta < 0 || e.eta > 1) throw std::invalid_argument("bias: eta must be in [0,1]");
                    if (e.z <= 0) throw std::invalid_argument("bias: z must be > 0");
                }
        }
    }
};

/// Read-only per-run inputs needed to evaluate biases and decisions.
struct BiasContext {
    const Topology& topo;
    const Catalog& catalog;
    const std::vector<int>& sources;
    const ShortestPaths* paths = nullptr; // required for shortest_path_cost
};

/// Bias f_n^k(V): a non-negative steering term added to the local counter
/// when comparing across links or ranking cache candidates.
inline double compute_bias(const NodeObjectMatrix<double>& v, const BiasSpec& spec,
                           const BiasContext& ctx, int node, int object) {
    // The model pins the source's counter at zero; the steering term keeps the
    // source's effective potential at zero too. Otherwise the gradient toward
    // the source inverts at its doorstep: the least-loaded neighbor ends up
    // with a zero differential on the final hop, and the source itself starts
    // bidding cache space for an object it already holds.
    if (ctx.sources[object] == node) return 0.0;
    switch (spec.kind) {
    case BiasKind::none:
        return 0.0;
    case BiasKind::min_next_hop: {
        double m = std::numeric_limits<double>::infinity();
        for (int lid : ctx.topo.out_links(node)) {
            if (!ctx.topo.link_allowed(lid, object)) continue;
            m = std::min(m, v(ctx.topo.link(lid).to, object));
        }
        // a node with no permitted next hops contributes no bias
        return std::isinf(m) ? 0.0 : m / spec.z;
    }
    case BiasKind::shortest_path_cost: {
        int d = ctx.paths->distance(node, ctx.sources[object]);
        return d < 0 ? 0.0 : spec.hop_cost * d;
    }
    case BiasKind::custom_table: {
        double f = 0;
        for (const EtaEntry& e : spec.table->at(node, object))
            f += e.eta * v(e.neighbor, object) / e.z;
        return f;
    }
    }
    return 0.0;
}

/// Fills eff(n,k) = V_n^k + f_n^k(V) for every pair.
inline void fill_effective_counts(const NodeObjectMatrix<double>& v,
                                  const BiasSpec& spec, const BiasContext& ctx,
                                  NodeObjectMatrix<double>& eff) {
    int nodes = v.nodes(), objects = v.objects();
    for (int n = 0; n < nodes; ++n)
        for (int k = 0; k < objects; ++k)
            eff(n, k) = v(n, k) + compute_bias(v, spec, ctx, n, k);
}

/// Enhanced backpressure weight W_ab^k = (V_a + f_a) - (V_b + f_b).
inline double backpressure_weight(const NodeObjectMatrix<double>& v,
                                  const BiasSpec& spec, const BiasContext& ctx,
                                  int a, int b, int object) {
    return (v(a, object) + compute_bias(v, spec, ctx, a, object)) -
           (v(b, object) + compute_bias(v, spec, ctx, b, object));
}

/// Per-slot VIP transmission rates. Each link carries at most one object at
/// the full normalized reverse capacity, so storage is one entry per link.
struct ForwardingAllocation {
    std::vector<int> object;  // -1 when the link is idle
    std::vector<double> rate; // objects per slot on the chosen object

    ForwardingAllocation() = default;
    explicit ForwardingAllocation(int links)
        : object(links, -1), rate(links, 0.0) {}

    double mu(int link_id, int k) const {
        return object[link_id] == k ? rate[link_id] : 0.0;
    }
    bool operator==(const ForwardingAllocation&) const = default;
};

/// Allocates each link's reverse capacity C_ba/D to the object with the
/// largest positive effective-count differential; ties break to the lowest
/// object index, non-positive best weight leaves the link idle.
inline ForwardingAllocation forwarding_from_counts(const NodeObjectMatrix<double>& eff,
                                                   const BiasContext& ctx) {
    const Topology& topo = ctx.topo;
    ForwardingAllocation alloc(topo.link_count());
    int objects = eff.objects();
    for (int lid = 0; lid < topo.link_count(); ++lid) {
        const Link& l = topo.link(lid);
        int best = -1;
        double best_w = 0;
        for (int k = 0; k < objects; ++k) {
            if (!topo.link_allowed(lid, k)) continue;
            double w = eff(l.from, k) - eff(l.to, k);
            if (best < 0 || w > best_w) {
                best = k;
                best_w = w;
            }
        }
        if (best >= 0 && best_w > 0) {
            alloc.object[lid] = best;
            alloc.rate[lid] = topo.reverse_capacity(l.from, l.to) /
                              static_cast<double>(ctx.catalog.object_size_bits);
        }
    }
    return alloc;
}

inline ForwardingAllocation forwarding_decision(const NodeObjectMatrix<double>& v,
                                                const BiasSpec& spec,
                                                const BiasContext& ctx) {
    NodeObjectMatrix<double> eff(v.nodes(), v.objects());
    fill_effective_counts(v, spec, ctx, eff);
    return forwarding_from_counts(eff, ctx);
}

/// Per-slot caching states s_n^k and drain rates r_n.
struct CacheDecision {
    NodeObjectMatrix<std::uint8_t> s;
    std::vector<double> rate; // r_n, objects per slot

    bool operator==(const CacheDecision&) const = default;
};

inline std::vector<double> default_cache_rates(const Topology& topo, const Catalog& cat) {
    std::vector<double> r(topo.node_count());
    for (int n = 0; n < topo.node_count(); ++n)
        r[n] = topo.cache_capacity_objects(n, cat);
    return r;
}

/// Max-weight cache selection: each node caches the floor(L_n/D) objects with
/// the largest weights. Unit-size items make the greedy top-m selection the
/// exact knapsack optimum. Ties break to the lowest object index.
inline CacheDecision caching_from_counts(const NodeObjectMatrix<double>& weights,
                                         const BiasContext& ctx,
                                         const std::vector<double>& cache_rate) {
    const Topology& topo = ctx.topo;
    int objects = weights.objects();
    CacheDecision d;
    d.s = NodeObjectMatrix<std::uint8_t>(topo.node_count(), objects, 0);
    d.rate = cache_rate;
    std::vector<int> order(objects);
    for (int n = 0; n < topo.node_count(); ++n) {
        int m = std::min(topo.cache_capacity_objects(n, ctx.catalog), objects);
        if (m <= 0) continue;
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + m, order.end(),
                          [&](int x, int y) {
                              double wx = weights(n, x), wy = weights(n, y);
                              return wx > wy || (wx == wy && x < y);
                          });
        for (int i = 0; i < m; ++i) d.s(n, order[i]) = 1;
    }
    return d;
}

inline CacheDecision caching_decision(const NodeObjectMatrix<double>& v,
                                      const BiasSpec& spec, const BiasContext& ctx,
                                      const std::vector<double>& cache_rate) {
    NodeObjectMatrix<double> eff(v.nodes(), v.objects());
    fill_effective_counts(v, spec, ctx, eff);
    return caching_from_counts(eff, ctx, cache_rate);
}

struct VipStepWorkspace {
    NodeObjectMatrix<double> out_alloc;
    NodeObjectMatrix<double> in_actual;

    void resize(int nodes, int objects) {
        if (out_alloc.nodes() != nodes || out_alloc.objects() != objects) {
            out_alloc = NodeObjectMatrix<double>(nodes, objects);
            in_actual = NodeObjectMatrix<double>(nodes, objects);
        }
    }
};

/// Advances the counters one slot:
///   V' = ((V - allocated out)^+ + inflow + actual in - r*s)^+ , sources -> 0.
/// A sender cannot ship more than it holds; its actual transfer
/// min(V, allocated) is split over its outgoing links for the object in
/// proportion to the allocation, and receivers see only actual transfers.
inline void vip_step(VipState& state, const NodeObjectMatrix<double>& inflow,
                     const ForwardingAllocation& alloc, const CacheDecision& cache,
                     const BiasContext& ctx, VipStepWorkspace& ws,
                     ForwardingAllocation* shipped = nullptr) {
    NodeObjectMatrix<double>& v = state.counts;
    int nodes = v.nodes(), objects = v.objects();
    const Topology& topo = ctx.topo;
    ws.resize(nodes, objects);
    ws.out_alloc.fill(0);
    ws.in_actual.fill(0);
    if (shipped) {
        shipped->object = alloc.object;
        shipped->rate.assign(alloc.rate.size(), 0.0);
    }
    for (int lid = 0; lid < topo.link_count(); ++lid) {
        int k = alloc.object[lid];
        if (k >= 0) ws.out_alloc(topo.link(lid).from, k) += alloc.rate[lid];
    }
    for (int lid = 0; lid < topo.link_count(); ++lid) {
        int k = alloc.object[lid];
        if (k < 0) continue;
        const Link& l = topo.link(lid);
        double allocated = ws.out_alloc(l.from, k);
        double actual = std::min(v(l.from, k), allocated);
        double sent = alloc.rate[lid] * (actual / allocated);
        ws.in_actual(l.to, k) += sent;
        if (shipped) shipped->rate[lid] = sent;
    }
    for (int n = 0; n < nodes; ++n) {
        for (int k = 0; k < objects; ++k) {
            if (ctx.sources[k] == n) {
                v(n, k) = 0;
                continue;
            }
            double drained = std::max(v(n, k) - ws.out_alloc(n, k), 0.0);
            double next = drained + inflow(n, k) + ws.in_actual(n, k) -
                          cache.rate[n] * cache.s(n, k);
            v(n, k) = std::max(next, 0.0);
        }
    }
    ++state.slot;
}

inline void vip_step(VipState& state, const NodeObjectMatrix<double>& inflow,
                     const ForwardingAllocation& alloc, const CacheDecision& cache,
                     const BiasContext& ctx) {
    VipStepWorkspace ws;
    vip_step(state, inflow, alloc, cache, ctx, ws);
}

/// Drives the per-slot cycle: observe V(t), decide forwarding and caching
/// from the observed counts, then apply the count update.
class VirtualPlaneEngine {
public:
    VirtualPlaneEngine(const BiasContext& ctx, BiasSpec bias, bool cache_bias_enabled,
                       std::vector<double> cache_rates)
        : ctx_(ctx), bias_(std::move(bias)), cache_bias_enabled_(cache_bias_enabled),
          cache_rates_(std::move(cache_rates)),
          state_(ctx.topo.node_count(), ctx.catalog.object_count),
          eff_(ctx.topo.node_count(), ctx.catalog.object_count) {
        bias_.check();
    }

    void step(const NodeObjectMatrix<double>& inflow) {
        fill_effective_counts(state_.counts, bias_, ctx_, eff_);
        alloc_ = forwarding_from_counts(eff_, ctx_);
        cache_ = caching_from_counts(cache_bias_enabled_ ? eff_ : state_.counts,
                                     ctx_, cache_rates_);
        vip_step(state_, inflow, alloc_, cache_, ctx_, ws_, &shipped_);
        check_invariants();
    }

    const VipState& state() const { return state_; }
    const ForwardingAllocation& last_allocation() const { return alloc_; }
    /// Actual VIP transfers of the last slot: same winning objects as
    /// last_allocation() but rates clamped by what senders held. Links can be
    /// allocated yet carry nothing when the sender's counter is empty.
    const ForwardingAllocation& last_shipped() const { return shipped_; }
    const CacheDecision& last_cache() const { return cache_; }
    const BiasSpec& bias() const { return bias_; }

private:
    void check_invariants() const {
        const auto& v = state_.counts;
        for (int k = 0; k < v.objects(); ++k)
            if (v(ctx_.sources[k], k) != 0.0)
                throw std::logic_error("vip invariant: source counter not pinned to zero");
        for (double x : v.raw())
            if (x < 0)
                throw std::logic_error("vip invariant: negative counter");
    }

    BiasContext ctx_;
    BiasSpec bias_;
    bool cache_bias_enabled_;
    std::vector<double> cache_rates_;
    VipState state_;
    NodeObjectMatrix<double> eff_;
    ForwardingAllocation alloc_;
    ForwardingAllocation shipped_;
    CacheDecision cache_;
    VipStepWorkspace ws_;
};

} // namespace vipsim

#endif
