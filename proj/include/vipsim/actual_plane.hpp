#ifndef VIPSIM_ACTUAL_PLANE_HPP_
#define VIPSIM_ACTUAL_PLANE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>
#include <vector>

#include "vipsim/baselines.hpp"
#include "vipsim/matrix.hpp"
#include "vipsim/metrics.hpp"
#include "vipsim/rng.hpp"
#include "vipsim/topology.hpp"
#include "vipsim/traffic.hpp"
#include "vipsim/virtual_plane.hpp"

namespace vipsim {

struct ActualPlaneOptions {
    int interest_size_bytes = 125;
    int flow_window = 100;          // slots in the sliding flow-rate window
    bool flow_ewma = false;         // EWMA with alpha = 1/flow_window instead
    bool strict_placement = false;  // count-driven placement needs a recent traversal
    int potential_refresh = 100;    // slots between potential recomputations
    double lce_bias_base = 1.0;     // insert prob = base / (base + hops from source)
    double random_insert_prob = 0.5;
    double lfu_decay = 0.99;
    int lfu_decay_interval = 100;
    int retx_base = 48;      // slots before a request may retransmit
    int retx_interval = 48;  // slots between retransmissions, 0 disables
    int retx_sweep = 16;     // how often the overdue scan runs
    std::uint64_t policy_seed = 1;
};

struct InterestPacket {
    int object = 0;
    int chunk = 0;
    std::int64_t face = 0; // >=0: upstream neighbor node id, <0: local request handle
    int hops = 0;
    bool sp_mode = false;  // hop budget exhausted: shortest path only from here on
    bool retx = false;     // consumer retransmission, exempt from aggregation
    std::vector<int> visited; // nodes that already forwarded this packet, in order
};

struct DataPacket {
    int object = 0;
    int chunk = 0;
    int hops_since_serve = 0;
};

inline std::int64_t local_face(std::uint64_t request) {
    return -static_cast<std::int64_t>(request) - 1;
}
inline bool is_local_face(std::int64_t face) { return face < 0; }
inline std::uint64_t face_request(std::int64_t face) {
    return static_cast<std::uint64_t>(-face - 1);
}

/// Per-link average rate of satisfied Interests (objects per slot), either a
/// sliding window or an EWMA. At most one object is credited per link and
/// slot, so the sliding window keeps one (object, amount) cell per slot.
class FlowEstimator {
public:
    FlowEstimator(int links, int objects, int window, bool ewma)
        : objects_(objects), window_(window), ewma_(ewma),
          sum_(static_cast<std::size_t>(links) * objects, 0.0) {
        if (!ewma_) ring_.assign(static_cast<std::size_t>(links) * window, {-1, 0.0});
    }

    void record(int link, int object, double amount) {
        if (amount <= 0.0) return;
        pending_.push_back({link, object, amount});
    }

    void advance(int slot) {
        if (ewma_) {
            const double a = 1.0 / window_;
            for (double& s : sum_) s *= 1.0 - a;
            for (const auto& p : pending_)
                sum_[static_cast<std::size_t>(p.link) * objects_ + p.object] += p.amount / window_;
        } else {
            int col = slot % window_;
            std::size_t links = ring_.size() / window_;
            for (std::size_t l = 0; l < links; ++l) {
                Cell& c = ring_[l * window_ + col];
                if (c.object >= 0) {
                    sum_[l * objects_ + c.object] -= c.amount;
                    c = {-1, 0.0};
                }
            }
            for (const auto& p : pending_) {
                Cell& c = ring_[static_cast<std::size_t>(p.link) * window_ + col];
                c.object = p.object;
                c.amount += p.amount;
                sum_[static_cast<std::size_t>(p.link) * objects_ + p.object] += p.amount;
            }
        }
        pending_.clear();
    }

    /// Flows summing to less than a couple of objects across the window read as
    /// zero: a one-off allocation win is noise, not a usable forwarding signal.
    double rate(int link, int object) const {
        double s = sum_[static_cast<std::size_t>(link) * objects_ + object];
        double r = ewma_ ? s : s / window_;
        return r * window_ >= 2.0 ? r : 0.0;
    }

private:
    struct Cell {
        int object;
        double amount;
    };
    struct Pending {
        int link;
        int object;
        double amount;
    };
    int objects_;
    int window_;
    bool ewma_;
    std::vector<double> sum_;
    std::vector<Cell> ring_; // link-major, window columns
    std::vector<Pending> pending_;
};

/// Interest/Data packet simulator: PIT aggregation, content stores, per-link
/// transmission budgets, chunk-level request tracking. Chunk c of a request
/// released at slot t is issued at slot t + c, pipelining the download the way
/// per-chunk Interest windows would. Interests carry their trail so that
/// flow-estimate forwarding never revisits a node, and a hop budget caps how
/// far a packet may stray off the shortest path before running home.
class ActualPlaneEngine {
public:
    ActualPlaneEngine(const Topology& topo, const Catalog& cat,
                      const std::vector<int>& sources, const ShortestPaths& paths,
                      Algorithm algo, const ActualPlaneOptions& opt, RunMetrics* metrics)
        : topo_(topo), cat_(cat), sources_(sources), paths_(paths),
          policy_(BaselinePolicy::of(algo)), opt_(opt), metrics_(metrics),
          flow_(topo.link_count(), cat.object_count, opt.flow_window, opt.flow_ewma),
          last_seen_(topo.node_count(), cat.object_count),
          rng_(opt.policy_seed) {
        last_seen_.fill(std::numeric_limits<std::int32_t>::min());
        ring_.assign(cat_.chunks_per_object, {});
        for (int n = 0; n < topo_.node_count(); ++n)
            stores_.emplace_back(topo_.cache_capacity_objects(n, cat_),
                                 eviction_for(policy_.caching));
        if (policy_.caching == CachingKind::lfu)
            freq_.assign(topo_.node_count(), std::vector<double>(cat_.object_count, 0.0));
        if (policy_.forwarding == ForwardingKind::potential) {
            potential_.assign(
                static_cast<std::size_t>(topo_.node_count()) * cat_.object_count, 0);
            refresh_potentials();
        }
        pit_.resize(topo_.node_count());
        for (int s = 0; s < 2; ++s) {
            interest_in_[s].resize(topo_.node_count());
            data_in_[s].resize(topo_.node_count());
            local_in_[s].resize(topo_.node_count());
        }
        interest_q_.resize(topo_.link_count());
        data_q_.resize(topo_.link_count());
        interest_credit_.assign(topo_.link_count(), 0.0);
        data_credit_.assign(topo_.link_count(), 0.0);
    }

    const ContentStore& store(int n) const { return stores_[n]; }
    ContentStore& store(int n) { return stores_[n]; }
    const FlowEstimator& flow() const { return flow_; }

    std::int64_t outstanding() const { return static_cast<std::int64_t>(requests_.size()); }

    int potential(int n, int k) const {
        return potential_[static_cast<std::size_t>(n) * cat_.object_count + k];
    }

    /// Runs one slot. `mu`/`cache` carry the slot's virtual-plane decisions
    /// (null for baseline policies); `admissions`/`queue_cap` are set only
    /// when congestion control gates request release.
    void step(int slot, const ArrivalBatch& new_requests,
              const ForwardingAllocation* mu, const CacheDecision* cache,
              const NodeObjectMatrix<double>* admissions = nullptr,
              const NodeObjectMatrix<double>* queue_cap = nullptr) {
        int cur = slot & 1;
        int nxt = cur ^ 1;

        // 1. the forwarding estimate averages the virtual-plane allocations
        if (policy_.forwarding == ForwardingKind::vip_flow) {
            if (mu != nullptr)
                for (int lid = 0; lid < topo_.link_count(); ++lid)
                    if (mu->object[lid] >= 0)
                        flow_.record(lid, mu->object[lid], mu->rate[lid]);
            flow_.advance(slot);
        }
        if (!freq_.empty() && opt_.lfu_decay_interval > 0 && slot > 0 &&
            slot % opt_.lfu_decay_interval == 0)
            decay_frequencies(opt_.lfu_decay);

        // 2. count-driven store sync before packet handling, so the caching
        // decision computed from V(t) shapes what slot t can serve
        if (policy_.caching == CachingKind::vip_decision && cache != nullptr)
            sync_stores(*cache, slot);
        if (policy_.forwarding == ForwardingKind::potential && slot > 0 &&
            opt_.potential_refresh > 0 && slot % opt_.potential_refresh == 0)
            refresh_potentials();

        // 3. new requests enter; congestion control may queue them
        create_requests(slot, new_requests, admissions, queue_cap);

        // 4. overdue requests re-issue their missing chunks, then chunks
        // scheduled for this slot become local Interests
        if (opt_.retx_interval > 0 && slot % opt_.retx_sweep == 0)
            retransmit_overdue(slot, cur);
        issue_scheduled(slot, cur);

        // 5. Data is consumed before Interests so stores updated by traversal
        // this slot can serve this slot's Interests
        process_data(slot, cur);

        // 6. Interests: serve locally or forward
        process_interests(cur, nxt);

        // 7. move packets across links under per-link budgets
        transmit(nxt);

        if (metrics_ != nullptr) metrics_->slots = slot + 1;
    }

    void decay_frequencies(double factor) {
        for (auto& row : freq_)
            for (double& f : row) f *= factor;
    }

private:
    struct RequestTrack {
        int origin = 0;
        int object = 0;
        int creation = 0;
        int remaining = 0;
        bool released = false; // chunks scheduled (false while admission-gated)
        int last_retx = -1;
        std::vector<std::uint8_t> have; // chunks already delivered
    };

    RequestTrack make_track(int n, int k, int slot) const {
        RequestTrack r;
        r.origin = n;
        r.object = k;
        r.creation = slot;
        r.remaining = cat_.chunks_per_object;
        r.have.assign(static_cast<std::size_t>(cat_.chunks_per_object), 0);
        return r;
    }
    struct LocalDelivery {
        std::uint64_t request;
        int chunk;
    };

    static std::uint64_t pit_key(int object, int chunk) {
        return (static_cast<std::uint64_t>(object) << 20) | static_cast<std::uint64_t>(chunk);
    }

    void create_requests(int slot, const ArrivalBatch& arr,
                         const NodeObjectMatrix<double>* admissions,
                         const NodeObjectMatrix<double>* queue_cap) {
        for (int n = 0; n < topo_.node_count(); ++n) {
            for (int k = 0; k < cat_.object_count; ++k) {
                int count = arr(n, k);
                if (count > 0 && !freq_.empty()) freq_[n][k] += count;
                if (admissions == nullptr) {
                    for (int i = 0; i < count; ++i) release_request(slot, n, k);
                    continue;
                }
                if (count <= 0 && waiting(n, k).empty()) continue;
                // congestion control: new requests wait in a transport queue,
                // this slot's admission quota releases from the front
                auto& waitq = waiting(n, k);
                for (int i = 0; i < count; ++i) {
                    std::uint64_t id = next_request_++;
                    requests_[id] = make_track(n, k, slot);
                    if (metrics_ != nullptr) metrics_->requests_issued++;
                    waitq.push_back(id);
                }
                credit(n, k) += (*admissions)(n, k);
                while (!waitq.empty() && credit(n, k) >= 1.0) {
                    credit(n, k) -= 1.0;
                    schedule_chunks(slot, waitq.front());
                    waitq.pop_front();
                }
                if (waitq.empty()) credit(n, k) = 0.0; // admission never exceeds demand
                if (queue_cap != nullptr) {
                    auto cap = static_cast<std::size_t>(std::ceil((*queue_cap)(n, k)));
                    while (waitq.size() > cap) {
                        drop_request(waitq.back());
                        waitq.pop_back();
                    }
                }
            }
        }
    }

    void release_request(int slot, int n, int k) {
        std::uint64_t id = next_request_++;
        requests_[id] = make_track(n, k, slot);
        if (metrics_ != nullptr) metrics_->requests_issued++;
        schedule_chunks(slot, id);
    }

    void schedule_chunks(int slot, std::uint64_t id) {
        requests_[id].released = true;
        int chunks = cat_.chunks_per_object;
        for (int c = 0; c < chunks; ++c)
            ring_[(slot + c) % chunks].push_back({id, c});
    }

    void drop_request(std::uint64_t id) {
        auto it = requests_.find(id);
        if (it == requests_.end()) return;
        if (metrics_ != nullptr) metrics_->requests_dropped++;
        requests_.erase(it);
    }

    /// Consumer retransmission: a request that has waited past the timeout
    /// re-issues Interests for its missing chunks. Retransmits bypass PIT
    /// aggregation, so a fetch completes even when the original Interest
    /// walked into a suppression cycle.
    void retransmit_overdue(int slot, int cur) {
        int timeout = opt_.retx_base + 2 * cat_.chunks_per_object;
        std::vector<std::uint64_t> due;
        for (const auto& [id, r] : requests_) {
            if (!r.released || slot - r.creation < timeout) continue;
            if (r.last_retx >= 0 && slot - r.last_retx < opt_.retx_interval) continue;
            due.push_back(id);
        }
        std::sort(due.begin(), due.end());
        for (std::uint64_t id : due) {
            RequestTrack& r = requests_[id];
            r.last_retx = slot;
            for (int c = 0; c < cat_.chunks_per_object; ++c) {
                if (r.have[static_cast<std::size_t>(c)]) continue;
                InterestPacket ip;
                ip.object = r.object;
                ip.chunk = c;
                ip.face = local_face(id);
                ip.retx = true;
                interest_in_[cur][r.origin].push_back(std::move(ip));
            }
        }
    }

    void issue_scheduled(int slot, int cur) {
        auto& cell = ring_[slot % cat_.chunks_per_object];
        for (const auto& [id, chunk] : cell) {
            auto it = requests_.find(id);
            if (it == requests_.end()) continue;
            interest_in_[cur][it->second.origin].push_back(
                {it->second.object, chunk, local_face(id)});
        }
        cell.clear();
    }

    void process_data(int slot, int cur) {
        for (int n = 0; n < topo_.node_count(); ++n) {
            for (const DataPacket& d : data_in_[cur][n]) {
                last_seen_(n, d.object) = slot;
                on_data_traversal(n, d);
                auto it = pit_[n].find(pit_key(d.object, d.chunk));
                if (it == pit_[n].end()) {
                    if (metrics_ != nullptr) metrics_->stale_data++;
                    continue;
                }
                for (std::int64_t face : it->second) {
                    if (is_local_face(face)) {
                        complete_chunk(slot, face_request(face), d.chunk);
                    } else {
                        data_q_[topo_.link_id(n, static_cast<int>(face))].push_back(d);
                    }
                }
                pit_[n].erase(it);
            }
            data_in_[cur][n].clear();
            for (const LocalDelivery& d : local_in_[cur][n])
                complete_chunk(slot, d.request, d.chunk);
            local_in_[cur][n].clear();
        }
    }

    void process_interests(int cur, int nxt) {
        for (int n = 0; n < topo_.node_count(); ++n) {
            for (const InterestPacket& ip : interest_in_[cur][n]) {
                if (sources_[ip.object] == n || stores_[n].contains(ip.object)) {
                    serve(n, ip, nxt);
                    continue;
                }
                auto key = pit_key(ip.object, ip.chunk);
                auto it = pit_[n].find(key);
                bool fresh = it == pit_[n].end();
                if (!fresh) {
                    auto& faces = it->second;
                    if (std::find(faces.begin(), faces.end(), ip.face) == faces.end())
                        faces.push_back(ip.face); // aggregate
                    // A pending entry left by another request means Data is on
                    // its way here, so the newcomer can stop. That wait can
                    // deadlock when two walks each stop on the other's trail;
                    // a token looping onto its own entry keeps moving, and
                    // retransmissions push through regardless, which drains
                    // any such web once their Data reaches it.
                    if (!was_on_trail(ip, n) && !ip.retx) continue;
                }
                InterestPacket fwd = ip;
                apply_hop_budget(fwd, n);
                int next = choose_next_hop(n, fwd);
                if (next < 0) {
                    if (metrics_ != nullptr) metrics_->unroutable++;
                    if (is_local_face(ip.face)) drop_request(face_request(ip.face));
                    continue;
                }
                if (fresh) pit_[n][key].push_back(ip.face);
                if (!was_on_trail(fwd, n)) fwd.visited.push_back(n);
                fwd.hops++;
                interest_q_[topo_.link_id(n, next)].push_back(std::move(fwd));
            }
            interest_in_[cur][n].clear();
        }
    }

    static bool was_on_trail(const InterestPacket& ip, int node) {
        return std::find(ip.visited.begin(), ip.visited.end(), node) != ip.visited.end();
    }

    /// Once a packet has wandered two hops past its shortest-path distance it
    /// runs straight for the source, which bounds every walk.
    void apply_hop_budget(InterestPacket& ip, int here) const {
        if (ip.sp_mode) return;
        int origin = ip.visited.empty() ? here : ip.visited.front();
        if (ip.hops >= paths_.distance(origin, sources_[ip.object]) + 2)
            ip.sp_mode = true;
    }

    /// A serving node emits one Data per pending face; each copy arrives one
    /// slot later (local consumers included), modelling forwarding delay.
    void serve(int n, const InterestPacket& ip, int nxt) {
        if (stores_[n].contains(ip.object)) stores_[n].touch(ip.object);
        auto emit = [&](std::int64_t face) {
            if (is_local_face(face)) {
                local_in_[nxt][n].push_back({face_request(face), ip.chunk});
            } else {
                data_q_[topo_.link_id(n, static_cast<int>(face))].push_back(
                    {ip.object, ip.chunk, 0});
            }
        };
        emit(ip.face);
        // faces already aggregated for this chunk are served as well
        auto it = pit_[n].find(pit_key(ip.object, ip.chunk));
        if (it != pit_[n].end()) {
            for (std::int64_t face : it->second) emit(face);
            pit_[n].erase(it);
        }
    }

    void complete_chunk(int slot, std::uint64_t id, int chunk) {
        auto it = requests_.find(id);
        if (it == requests_.end()) return;
        RequestTrack& r = it->second;
        // retransmission can deliver a chunk twice; only the first one counts
        if (r.have[static_cast<std::size_t>(chunk)]) return;
        r.have[static_cast<std::size_t>(chunk)] = 1;
        if (--r.remaining == 0) {
            if (metrics_ != nullptr)
                metrics_->note_completion(r.origin, r.object, r.creation, slot);
            requests_.erase(it);
        }
    }

    int choose_next_hop(int n, const InterestPacket& ip) {
        int k = ip.object;
        switch (policy_.forwarding) {
        case ForwardingKind::shortest_path:
            return paths_.next_hop(n, sources_[k]);
        case ForwardingKind::vip_flow: {
            if (ip.sp_mode) return paths_.next_hop(n, sources_[k]);
            int best = -1;
            double best_rate = 0.0;
            for (int lid : topo_.out_links(n)) {
                if (!topo_.link_allowed(lid, k)) continue;
                int b = topo_.link(lid).to;
                if (!is_local_face(ip.face) && b == static_cast<int>(ip.face)) continue;
                if (was_on_trail(ip, b)) continue; // never walk a loop
                double r = flow_.rate(lid, k);
                if (r > best_rate) {
                    best_rate = r;
                    best = b;
                }
            }
            if (best >= 0) return best;
            return paths_.next_hop(n, sources_[k]);
        }
        case ForwardingKind::potential: {
            int best = -1;
            int best_pot = potential(n, k);
            for (int lid : topo_.out_links(n)) {
                if (!topo_.link_allowed(lid, k)) continue;
                int b = topo_.link(lid).to;
                if (potential(b, k) < best_pot) {
                    best_pot = potential(b, k);
                    best = b;
                }
            }
            if (best >= 0) return best;
            return paths_.next_hop(n, sources_[k]);
        }
        }
        return -1;
    }

    void transmit(int nxt) {
        for (int lid = 0; lid < topo_.link_count(); ++lid) {
            const Link& l = topo_.link(lid);
            double imax = l.capacity_bits / (static_cast<double>(opt_.interest_size_bytes) * 8.0);
            double dmax = l.capacity_bits / static_cast<double>(cat_.chunk_size_bits);
            interest_credit_[lid] = std::min(interest_credit_[lid] + imax, 2.0 * imax);
            data_credit_[lid] = std::min(data_credit_[lid] + dmax, 2.0 * dmax);

            auto& iq = interest_q_[lid];
            while (!iq.empty() && interest_credit_[lid] >= 1.0) {
                InterestPacket ip = iq.front();
                iq.pop_front();
                ip.face = l.from;
                interest_in_[nxt][l.to].push_back(ip);
                interest_credit_[lid] -= 1.0;
            }

            auto& dq = data_q_[lid];
            while (!dq.empty() && data_credit_[lid] >= 1.0) {
                DataPacket dp = dq.front();
                dq.pop_front();
                dp.hops_since_serve++;
                data_in_[nxt][l.to].push_back(dp);
                data_credit_[lid] -= 1.0;
            }
        }
    }

    void on_data_traversal(int n, const DataPacket& d) {
        if (stores_[n].capacity() <= 0) return;
        switch (policy_.caching) {
        case CachingKind::vip_decision:
            break;
        case CachingKind::lfu:
            stores_[n].insert(d.object, nullptr, &freq_[n]);
            break;
        case CachingKind::lce_unif:
        case CachingKind::lce_lru:
            stores_[n].insert(d.object, &rng_);
            break;
        case CachingKind::lcd_lru:
            if (d.hops_since_serve == 1) stores_[n].insert(d.object, &rng_);
            break;
        case CachingKind::lce_bias: {
            if (stores_[n].contains(d.object)) {
                stores_[n].touch(d.object);
                break;
            }
            int hops = paths_.distance(n, sources_[d.object]);
            double p = opt_.lce_bias_base / (opt_.lce_bias_base + std::max(hops, 0));
            if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p)
                stores_[n].insert(d.object, &rng_);
            break;
        }
        case CachingKind::random_half:
            if (!stores_[n].contains(d.object) &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng_) <
                    opt_.random_insert_prob)
                stores_[n].insert(d.object, &rng_);
            break;
        }
    }

    void sync_stores(const CacheDecision& cache, int slot) {
        for (int n = 0; n < topo_.node_count(); ++n) {
            int cap = stores_[n].capacity();
            if (cap <= 0) continue;
            std::vector<int> next;
            next.reserve(cap);
            if (!opt_.strict_placement) {
                for (int k = 0; k < cat_.object_count; ++k)
                    if (cache.s(n, k) != 0) next.push_back(k);
            } else {
                // keep currently cached selections; place new ones only when a
                // Data for the object traversed n within the flow window; left
                // over capacity retains current residents
                std::vector<int> holdover;
                for (int k : stores_[n].recency_order())
                    if (cache.s(n, k) == 0) holdover.push_back(k);
                for (int k = 0; k < cat_.object_count; ++k) {
                    if (cache.s(n, k) == 0) continue;
                    if (stores_[n].contains(k) ||
                        last_seen_(n, k) >= slot - opt_.flow_window)
                        next.push_back(k);
                }
                for (int k : holdover) {
                    if (static_cast<int>(next.size()) >= cap) break;
                    next.push_back(k);
                }
            }
            stores_[n].assign(next);
        }
    }

    void refresh_potentials() {
        int K = cat_.object_count;
        int N = topo_.node_count();
        for (int k = 0; k < K; ++k) {
            std::vector<int>& dist = bfs_scratch_;
            dist.assign(N, std::numeric_limits<int>::max());
            std::queue<int> q;
            auto seed = [&](int n) {
                if (dist[n] != std::numeric_limits<int>::max()) return;
                dist[n] = 0;
                q.push(n);
            };
            seed(sources_[k]);
            for (int n = 0; n < N; ++n)
                if (stores_[n].contains(k)) seed(n);
            while (!q.empty()) {
                int b = q.front();
                q.pop();
                for (int lid : topo_.in_links(b)) {
                    int a = topo_.link(lid).from;
                    if (dist[a] != std::numeric_limits<int>::max()) continue;
                    dist[a] = dist[b] + 1;
                    q.push(a);
                }
            }
            for (int n = 0; n < N; ++n)
                potential_[static_cast<std::size_t>(n) * K + k] =
                    dist[n] == std::numeric_limits<int>::max() ? N + K : dist[n];
        }
    }

    std::deque<std::uint64_t>& waiting(int n, int k) {
        if (waiting_.empty())
            waiting_.resize(static_cast<std::size_t>(topo_.node_count()) * cat_.object_count);
        return waiting_[static_cast<std::size_t>(n) * cat_.object_count + k];
    }
    double& credit(int n, int k) {
        if (credit_.empty())
            credit_.assign(static_cast<std::size_t>(topo_.node_count()) * cat_.object_count, 0.0);
        return credit_[static_cast<std::size_t>(n) * cat_.object_count + k];
    }

    const Topology& topo_;
    const Catalog& cat_;
    const std::vector<int>& sources_;
    const ShortestPaths& paths_;
    BaselinePolicy policy_;
    ActualPlaneOptions opt_;
    RunMetrics* metrics_;

    std::vector<ContentStore> stores_;
    std::vector<std::vector<double>> freq_;
    std::vector<std::unordered_map<std::uint64_t, std::vector<std::int64_t>>> pit_;
    FlowEstimator flow_;
    NodeObjectMatrix<std::int32_t> last_seen_;
    std::vector<int> potential_;
    std::vector<int> bfs_scratch_;

    std::unordered_map<std::uint64_t, RequestTrack> requests_;
    std::uint64_t next_request_ = 0;
    std::vector<std::vector<std::pair<std::uint64_t, int>>> ring_;

    std::vector<std::vector<InterestPacket>> interest_in_[2];
    std::vector<std::vector<DataPacket>> data_in_[2];
    std::vector<std::vector<LocalDelivery>> local_in_[2];
    std::vector<std::deque<InterestPacket>> interest_q_;
    std::vector<std::deque<DataPacket>> data_q_;
    std::vector<double> interest_credit_;
    std::vector<double> data_credit_;

    std::vector<std::deque<std::uint64_t>> waiting_;
    std::vector<double> credit_;

    Rng rng_;
};

} // namespace vipsim

#endif
