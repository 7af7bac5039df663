#ifndef VIPSIM_BASELINES_HPP_
#define VIPSIM_BASELINES_HPP_

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "vipsim/rng.hpp"

namespace vipsim {

enum class Algorithm {
    evip,             // virtual-plane driven, biased counts
    vip,              // virtual-plane driven, plain counts
    sp_lfu,
    sp_lce_unif,
    sp_lce_lru,
    sp_lcd_lru,
    sp_lce_bias,
    potential_random,
};

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "evip") return Algorithm::evip;
    if (s == "vip") return Algorithm::vip;
    if (s == "sp_lfu") return Algorithm::sp_lfu;
    if (s == "sp_lce_unif") return Algorithm::sp_lce_unif;
    if (s == "sp_lce_lru") return Algorithm::sp_lce_lru;
    if (s == "sp_lcd_lru") return Algorithm::sp_lcd_lru;
    if (s == "sp_lce_bias") return Algorithm::sp_lce_bias;
    if (s == "potential_random") return Algorithm::potential_random;
    throw std::invalid_argument("unknown algorithm: " + s);
}

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::evip: return "evip";
    case Algorithm::vip: return "vip";
    case Algorithm::sp_lfu: return "sp_lfu";
    case Algorithm::sp_lce_unif: return "sp_lce_unif";
    case Algorithm::sp_lce_lru: return "sp_lce_lru";
    case Algorithm::sp_lcd_lru: return "sp_lcd_lru";
    case Algorithm::sp_lce_bias: return "sp_lce_bias";
    case Algorithm::potential_random: return "potential_random";
    }
    return "?";
}

inline bool is_vip_family(Algorithm a) {
    return a == Algorithm::evip || a == Algorithm::vip;
}

enum class ForwardingKind { vip_flow, shortest_path, potential };
enum class CachingKind { vip_decision, lfu, lce_unif, lce_lru, lcd_lru, lce_bias, random_half };

struct BaselinePolicy {
    ForwardingKind forwarding;
    CachingKind caching;

    static BaselinePolicy of(Algorithm a) {
        switch (a) {
        case Algorithm::evip:
        case Algorithm::vip: return {ForwardingKind::vip_flow, CachingKind::vip_decision};
        case Algorithm::sp_lfu: return {ForwardingKind::shortest_path, CachingKind::lfu};
        case Algorithm::sp_lce_unif: return {ForwardingKind::shortest_path, CachingKind::lce_unif};
        case Algorithm::sp_lce_lru: return {ForwardingKind::shortest_path, CachingKind::lce_lru};
        case Algorithm::sp_lcd_lru: return {ForwardingKind::shortest_path, CachingKind::lcd_lru};
        case Algorithm::sp_lce_bias: return {ForwardingKind::shortest_path, CachingKind::lce_bias};
        case Algorithm::potential_random: return {ForwardingKind::potential, CachingKind::random_half};
        }
        throw std::logic_error("unreachable");
    }
};

/// Whole-object content store with pluggable eviction. The recency list is
/// kept for every policy (front = least recently used) and doubles as the
/// deterministic iteration order for victim scans.
class ContentStore {
public:
    enum class Eviction { lru, uniform_random, lfu, random_pick };

    ContentStore(int capacity, Eviction ev) : capacity_(capacity), eviction_(ev) {}

    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(recency_.size()); }
    bool contains(int object) const { return present_.count(object) != 0; }
    const std::vector<int>& recency_order() const { return recency_; }

    std::vector<int> contents_sorted() const {
        std::vector<int> c = recency_;
        std::sort(c.begin(), c.end());
        return c;
    }

    void touch(int object) {
        auto it = std::find(recency_.begin(), recency_.end(), object);
        if (it != recency_.end()) {
            recency_.erase(it);
            recency_.push_back(object);
        }
    }

    /// Inserts (or refreshes) an object, evicting per policy when full.
    /// Returns the evicted object id, or -1.
    int insert(int object, Rng* rng = nullptr, const std::vector<double>* freq = nullptr) {
        if (capacity_ <= 0) return -1;
        if (contains(object)) {
            touch(object);
            return -1;
        }
        int victim = -1;
        if (size() >= capacity_) {
            victim = pick_victim(rng, freq);
            erase(victim);
        }
        recency_.push_back(object);
        present_.insert(object);
        return victim;
    }

    void erase(int object) {
        auto it = std::find(recency_.begin(), recency_.end(), object);
        if (it != recency_.end()) {
            recency_.erase(it);
            present_.erase(object);
        }
    }

    /// Wholesale replacement, used by the count-driven policies.
    void assign(const std::vector<int>& objects) {
        recency_ = objects;
        present_.clear();
        present_.insert(objects.begin(), objects.end());
    }

private:
    int pick_victim(Rng* rng, const std::vector<double>* freq) const {
        switch (eviction_) {
        case Eviction::lru:
            return recency_.front();
        case Eviction::uniform_random:
        case Eviction::random_pick: {
            std::uniform_int_distribution<int> pick(0, size() - 1);
            return recency_[pick(*rng)];
        }
        case Eviction::lfu: {
            int victim = recency_.front();
            double best = (*freq)[victim];
            for (int obj : recency_)
                if ((*freq)[obj] < best || ((*freq)[obj] == best && obj < victim)) {
                    victim = obj;
                    best = (*freq)[obj];
                }
            return victim;
        }
        }
        return recency_.front();
    }

    int capacity_;
    Eviction eviction_;
    std::vector<int> recency_;
    std::unordered_set<int> present_;
};

inline ContentStore::Eviction eviction_for(CachingKind k) {
    switch (k) {
    case CachingKind::lce_unif: return ContentStore::Eviction::uniform_random;
    case CachingKind::lfu: return ContentStore::Eviction::lfu;
    case CachingKind::random_half: return ContentStore::Eviction::random_pick;
    default: return ContentStore::Eviction::lru;
    }
}

} // namespace vipsim

#endif
