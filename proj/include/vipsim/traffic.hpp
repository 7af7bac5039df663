#ifndef VIPSIM_TRAFFIC_HPP_
#define VIPSIM_TRAFFIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vipsim/matrix.hpp"
#include "vipsim/rng.hpp"
#include "vipsim/topology.hpp"

namespace vipsim {

/// Zipf popularity law over object ranks 1..K: p_k proportional to k^(-s).
struct PopularityModel {
    std::vector<double> p;
    std::vector<double> cdf;
    double exponent = 0;

    static PopularityModel zipf(int object_count, double exponent) {
        if (object_count < 1) throw std::invalid_argument("zipf: object_count must be >= 1");
        if (exponent < 0) throw std::invalid_argument("zipf: exponent must be >= 0");
        PopularityModel m;
        m.exponent = exponent;
        m.p.resize(object_count);
        for (int k = 0; k < object_count; ++k)
            m.p[k] = std::pow(static_cast<double>(k + 1), -exponent);
        double total = std::accumulate(m.p.begin(), m.p.end(), 0.0);
        for (double& x : m.p) x /= total;
        m.cdf.resize(object_count);
        double acc = 0;
        for (int k = 0; k < object_count; ++k) {
            acc += m.p[k];
            m.cdf[k] = acc;
        }
        m.cdf.back() = 1.0;
        return m;
    }

    int sample(double u) const {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        return static_cast<int>(it - cdf.begin());
    }
};

/// One slot of exogenous request arrivals, A_n^k(t).
using ArrivalBatch = NodeObjectMatrix<std::int32_t>;

/// Per-slot Poisson arrivals thinned over objects by popularity. Each node
/// draws from its own substream so the workload at one node is unaffected by
/// how many other nodes exist. Requests for an object at its own source are
/// never generated (the source satisfies them instantly).
class ArrivalGenerator {
public:
    ArrivalGenerator(const Topology& topo, const Catalog& cat,
                     const PopularityModel& pop, const std::vector<int>& sources,
                     double lambda_per_node, std::vector<int> requesting_nodes,
                     double truncation_factor, std::uint64_t master_seed)
        : pop_(&pop), sources_(&sources), lambda_(lambda_per_node),
          requesting_(std::move(requesting_nodes)),
          batch_(topo.node_count(), cat.object_count) {
        if (lambda_ < 0) throw std::invalid_argument("lambda must be >= 0");
        arrival_cap_ = static_cast<std::int32_t>(
            std::ceil(truncation_factor * lambda_ * pop.p.front()));
        engines_.reserve(topo.node_count());
        for (int n = 0; n < topo.node_count(); ++n)
            engines_.emplace_back(derive_seed(master_seed, kStreamTrafficBase + n));
    }

    const ArrivalBatch& next_slot() {
        batch_.fill(0);
        if (lambda_ <= 0) return batch_;
        std::poisson_distribution<int> total(lambda_);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int n : requesting_) {
            Rng& rng = engines_[n];
            int count = total(rng);
            for (int i = 0; i < count; ++i) {
                int k = pop_->sample(unif(rng));
                if ((*sources_)[k] == n) continue;
                if (batch_(n, k) >= arrival_cap_) {
                    ++truncated_;
                    continue;
                }
                ++batch_(n, k);
            }
        }
        return batch_;
    }

    std::int32_t arrival_cap() const { return arrival_cap_; }
    std::uint64_t truncated() const { return truncated_; }
    const std::vector<int>& requesting_nodes() const { return requesting_; }

private:
    const PopularityModel* pop_;
    const std::vector<int>* sources_;
    double lambda_;
    std::vector<int> requesting_;
    std::vector<Rng> engines_;
    ArrivalBatch batch_;
    std::int32_t arrival_cap_ = 0;
    std::uint64_t truncated_ = 0;
};

inline std::vector<int> all_nodes(const Topology& topo) {
    std::vector<int> v(topo.node_count());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace vipsim

#endif
