#ifndef VIPSIM_CONGESTION_HPP_
#define VIPSIM_CONGESTION_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vipsim/matrix.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/traffic.hpp"

namespace vipsim {

/// Concave, non-decreasing admission utility g(x). The built-in alpha-fair
/// utility with alpha=2 is g(x) = -1/x; custom utilities are checked for
/// shape numerically on a grid at construction.
struct UtilityFunction {
    enum class Kind { alpha_fair_2, custom };
    Kind kind = Kind::alpha_fair_2;
    std::function<double(double)> fn;

    double operator()(double x) const {
        if (kind == Kind::alpha_fair_2) return x > 0 ? -1.0 / x : -std::numeric_limits<double>::infinity();
        return fn(x);
    }

    static UtilityFunction alpha_fair_2() { return {}; }

    static UtilityFunction custom(std::function<double(double)> g, double domain_max) {
        if (domain_max <= 0) throw std::invalid_argument("utility: domain_max must be > 0");
        constexpr int kGrid = 1024;
        double lo = domain_max * 1e-9;
        double step = (domain_max - lo) / (kGrid - 1);
        double prev = g(lo), prev_diff = 0;
        for (int i = 1; i < kGrid; ++i) {
            double x = lo + i * step;
            double y = g(x);
            double diff = y - prev;
            if (diff < -1e-12 * std::max(1.0, std::abs(y)))
                throw std::invalid_argument("utility: not non-decreasing on the domain");
            if (i > 1 && diff > prev_diff + 1e-9 * std::max(1.0, std::abs(y)))
                throw std::invalid_argument("utility: not concave on the domain");
            prev = y;
            prev_diff = diff;
        }
        UtilityFunction u;
        u.kind = Kind::custom;
        u.fn = std::move(g);
        return u;
    }
};

/// Admission rule: admit min(Q, alpha_max) exactly when the virtual count
/// strictly exceeds the network-layer count.
inline double admit_amount(double q, double y, double v, double alpha_max) {
    return y > v ? std::min(q, alpha_max) : 0.0;
}

inline NodeObjectMatrix<double> admit_vips(const NodeObjectMatrix<double>& q,
                                           const NodeObjectMatrix<double>& y,
                                           const NodeObjectMatrix<double>& v,
                                           const NodeObjectMatrix<double>& alpha_max) {
    NodeObjectMatrix<double> a(q.nodes(), q.objects());
    for (int n = 0; n < q.nodes(); ++n)
        for (int k = 0; k < q.objects(); ++k)
            a(n, k) = admit_amount(q(n, k), y(n, k), v(n, k), alpha_max(n, k));
    return a;
}

/// Picks the virtual-queue input rate: argmax of W*g(gamma) - Y*gamma over
/// [0, alpha_max]. For the built-in utility the stationary point W/x^2 = Y
/// gives x = sqrt(W/Y) in closed form; custom utilities fall back to
/// golden-section search (the objective is concave in gamma).
inline double choose_auxiliary(double y, double w, double alpha_max,
                               const UtilityFunction& g) {
    if (w <= 0) throw std::invalid_argument("choose_auxiliary: W must be > 0");
    if (alpha_max <= 0) return 0.0;
    if (g.kind == UtilityFunction::Kind::alpha_fair_2) {
        if (y <= 0) return alpha_max; // objective is increasing in gamma
        return std::min(std::sqrt(w / y), alpha_max);
    }
    auto objective = [&](double x) { return w * g(x) - y * x; };
    double lo = 1e-9 * alpha_max, hi = alpha_max;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double tol = 1e-9 * alpha_max;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(x1);
        }
    }
    double mid = (lo + hi) / 2;
    // endpoints may beat the interior bracket
    if (objective(alpha_max) >= objective(mid)) return alpha_max;
    return mid;
}

/// Transport buffer update Q' = min((Q - a)^+ + A, Q_max). Returns the
/// amount clipped by the buffer bound, counted as dropped demand.
inline double transport_step(NodeObjectMatrix<double>& q,
                             const NodeObjectMatrix<double>& admitted,
                             const NodeObjectMatrix<std::int32_t>& arrivals,
                             const NodeObjectMatrix<double>& q_max) {
    double dropped = 0;
    for (int n = 0; n < q.nodes(); ++n)
        for (int k = 0; k < q.objects(); ++k) {
            double grown = std::max(q(n, k) - admitted(n, k), 0.0) + arrivals(n, k);
            double clamped = std::min(grown, q_max(n, k));
            dropped += grown - clamped;
            q(n, k) = clamped;
        }
    return dropped;
}

/// Virtual queue update Y' = (Y - a)^+ + gamma.
inline void virtual_step(NodeObjectMatrix<double>& y,
                         const NodeObjectMatrix<double>& admitted,
                         const NodeObjectMatrix<double>& aux) {
    for (int n = 0; n < y.nodes(); ++n)
        for (int k = 0; k < y.objects(); ++k)
            y(n, k) = std::max(y(n, k) - admitted(n, k), 0.0) + aux(n, k);
}

/// Per-object admission burst bounds: ceil(factor * lambda * p_k).
inline std::vector<double> default_alpha_max(const PopularityModel& pop,
                                             double lambda, double factor) {
    std::vector<double> a(pop.p.size());
    for (std::size_t k = 0; k < pop.p.size(); ++k)
        a[k] = std::max(std::ceil(factor * lambda * pop.p[k]), 1.0);
    return a;
}

/// Transport-layer buffering, admission control and virtual-queue tracking
/// for one run. Each slot: observe (V, Y, Q), admit, pick the auxiliary
/// input rate, then update Q with the slot's arrivals and Y with the chosen
/// rates.
class CongestionEngine {
public:
    CongestionEngine(const Topology& topo, const Catalog& cat,
                     const PopularityModel& pop, double lambda, double w,
                     double alpha_max_factor, double q_max_factor,
                     UtilityFunction utility)
        : w_(w), utility_(std::move(utility)),
          q_(topo.node_count(), cat.object_count),
          y_(topo.node_count(), cat.object_count),
          alpha_max_(topo.node_count(), cat.object_count),
          q_max_(topo.node_count(), cat.object_count),
          admitted_(topo.node_count(), cat.object_count),
          aux_(topo.node_count(), cat.object_count) {
        if (w <= 0) throw std::invalid_argument("congestion: W must be > 0");
        std::vector<double> per_object = default_alpha_max(pop, lambda, alpha_max_factor);
        for (int n = 0; n < topo.node_count(); ++n)
            for (int k = 0; k < cat.object_count; ++k) {
                alpha_max_(n, k) = per_object[k];
                q_max_(n, k) = q_max_factor * per_object[k];
            }
    }

    /// Returns the slot's admissions; these feed the network-layer counters
    /// in place of the exogenous arrivals.
    const NodeObjectMatrix<double>& step(const NodeObjectMatrix<double>& v,
                                         const NodeObjectMatrix<std::int32_t>& arrivals) {
        for (int n = 0; n < q_.nodes(); ++n)
            for (int k = 0; k < q_.objects(); ++k) {
                admitted_(n, k) = admit_amount(q_(n, k), y_(n, k), v(n, k), alpha_max_(n, k));
                aux_(n, k) = choose_auxiliary(y_(n, k), w_, alpha_max_(n, k), utility_);
            }
        dropped_ += transport_step(q_, admitted_, arrivals, q_max_);
        virtual_step(y_, admitted_, aux_);
        admitted_sum_ += admitted_.sum();
        aux_sum_ += aux_.sum();
        return admitted_;
    }

    const NodeObjectMatrix<double>& transport() const { return q_; }
    const NodeObjectMatrix<double>& virtual_counts() const { return y_; }
    const NodeObjectMatrix<double>& alpha_max() const { return alpha_max_; }
    const NodeObjectMatrix<double>& q_max() const { return q_max_; }
    double dropped() const { return dropped_; }
    double admitted_sum() const { return admitted_sum_; }
    double aux_sum() const { return aux_sum_; }

private:
    double w_;
    UtilityFunction utility_;
    NodeObjectMatrix<double> q_, y_, alpha_max_, q_max_, admitted_, aux_;
    double dropped_ = 0, admitted_sum_ = 0, aux_sum_ = 0;
};

} // namespace vipsim

#endif
