#ifndef VIPSIM_TOPOLOGY_HPP_
#define VIPSIM_TOPOLOGY_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vipsim/rng.hpp"

namespace vipsim {

/// Object catalog: K equally sized objects, each split into fixed-size chunks
/// (one chunk per Data Packet payload).
struct Catalog {
    int object_count = 0;
    std::int64_t chunk_size_bits = 0;
    int chunks_per_object = 1;
    std::int64_t object_size_bits = 0;

    static Catalog make(int object_count, std::int64_t data_size_bytes,
                        int chunks_per_object) {
        if (object_count < 1) throw std::invalid_argument("catalog: object_count must be >= 1");
        if (data_size_bytes < 1) throw std::invalid_argument("catalog: data_size_bytes must be >= 1");
        if (chunks_per_object < 1) throw std::invalid_argument("catalog: chunks_per_object must be >= 1");
        Catalog c;
        c.object_count = object_count;
        c.chunk_size_bits = data_size_bytes * 8;
        c.chunks_per_object = chunks_per_object;
        c.object_size_bits = c.chunk_size_bits * chunks_per_object;
        return c;
    }
};

struct Link {
    int from = -1;
    int to = -1;
    double capacity_bits = 0; // bits per slot
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Directed multi-hop network; every link has its reverse present. Immutable
/// once built apart from cache sizes and per-object link restrictions, both
/// of which are set before any run starts.
///
/// File format (one directive per line, '#' starts a comment):
///   nodes <N>                      first directive, node ids are 0..N-1
///   <a> <b> <capacity_mb_per_slot> undirected edge, expands to both links
///   link <a> <b> <capacity_mb>    one directed link (reverse must appear too)
///   cache <n> <bytes>              overrides the default cache size at n
class Topology {
public:
    static Topology parse(const std::string& text,
                          std::int64_t default_cache_bytes = 0,
                          double capacity_scale = 1.0) {
        Topology topo;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        bool have_nodes = false;
        std::vector<int> directed_lines; // line number per directed-only link
        while (std::getline(in, line)) {
            ++lineno;
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first)) continue;
            if (!have_nodes) {
                if (first != "nodes") throw ParseError(lineno, "expected 'nodes <N>' before any other directive");
                int n = -1;
                if (!(ls >> n) || n < 1) throw ParseError(lineno, "invalid node count");
                topo.node_count_ = n;
                topo.cache_bits_.assign(n, static_cast<double>(default_cache_bytes) * 8.0);
                topo.out_links_.resize(n);
                topo.in_links_.resize(n);
                have_nodes = true;
                continue;
            }
            if (first == "cache") {
                int n = -1;
                double bytes = -1;
                if (!(ls >> n >> bytes)) throw ParseError(lineno, "malformed cache directive");
                if (n < 0 || n >= topo.node_count_) throw ParseError(lineno, "unknown node " + std::to_string(n));
                if (bytes < 0) throw ParseError(lineno, "negative cache size");
                topo.cache_bits_[n] = bytes * 8.0;
                continue;
            }
            bool directed = false;
            int a, b;
            double cap_mb;
            if (first == "link") {
                directed = true;
                if (!(ls >> a >> b >> cap_mb)) throw ParseError(lineno, "malformed link directive");
            } else {
                std::istringstream es(line);
                if (!(es >> a >> b >> cap_mb)) throw ParseError(lineno, "malformed edge line");
            }
            if (a < 0 || a >= topo.node_count_) throw ParseError(lineno, "unknown node " + std::to_string(a));
            if (b < 0 || b >= topo.node_count_) throw ParseError(lineno, "unknown node " + std::to_string(b));
            if (a == b) throw ParseError(lineno, "self-loop at node " + std::to_string(a));
            if (cap_mb <= 0) throw ParseError(lineno, "non-positive capacity on link " + std::to_string(a) + " " + std::to_string(b));
            double cap_bits = cap_mb * 1e6 * capacity_scale;
            topo.add_link(a, b, cap_bits, lineno);
            if (directed) {
                directed_lines.push_back(lineno);
            } else {
                topo.add_link(b, a, cap_bits, lineno);
                directed_lines.push_back(0); // paired by construction
                directed_lines.push_back(0);
            }
        }
        if (!have_nodes) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'nodes <N>' directive");
        // every link must have its reverse
        for (std::size_t i = 0; i < topo.links_.size(); ++i) {
            const Link& l = topo.links_[i];
            if (topo.link_id(l.to, l.from) < 0)
                throw ParseError(directed_lines[i], "missing reverse link for " + std::to_string(l.from) + " " + std::to_string(l.to));
        }
        for (int n = 0; n < topo.node_count_; ++n) {
            auto by_peer = [&topo](int x, int y) { return topo.links_[x].to < topo.links_[y].to; };
            std::sort(topo.out_links_[n].begin(), topo.out_links_[n].end(), by_peer);
            std::sort(topo.in_links_[n].begin(), topo.in_links_[n].end(),
                      [&topo](int x, int y) { return topo.links_[x].from < topo.links_[y].from; });
        }
        return topo;
    }

    static Topology parse_file(const std::string& path,
                               std::int64_t default_cache_bytes = 0,
                               double capacity_scale = 1.0) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open topology file: " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), default_cache_bytes, capacity_scale);
    }

    int node_count() const { return node_count_; }
    int link_count() const { return static_cast<int>(links_.size()); }
    const Link& link(int id) const { return links_[id]; }

    int link_id(int a, int b) const {
        auto it = link_index_.find(key(a, b));
        return it == link_index_.end() ? -1 : it->second;
    }

    double capacity(int a, int b) const {
        int id = link_id(a, b);
        if (id < 0) throw std::out_of_range("no link " + std::to_string(a) + "->" + std::to_string(b));
        return links_[id].capacity_bits;
    }

    /// C_ba for link (a,b): Data Packets travel the reverse path, so VIP
    /// transmission on (a,b) is budgeted by the reverse capacity.
    double reverse_capacity(int a, int b) const { return capacity(b, a); }

    const std::vector<int>& out_links(int n) const { return out_links_[n]; }
    const std::vector<int>& in_links(int n) const { return in_links_[n]; }

    double cache_bits(int n) const { return cache_bits_[n]; }
    void set_cache_bits(int n, double bits) { cache_bits_[n] = bits; }
    void set_all_cache_bits(double bits) { cache_bits_.assign(node_count_, bits); }

    int cache_capacity_objects(int n, const Catalog& cat) const {
        return static_cast<int>(cache_bits_[n] / static_cast<double>(cat.object_size_bits));
    }

    /// Restricts the links permitted to carry an object's VIPs and Interests.
    /// Objects without a restriction may use every link.
    void restrict_object_links(int object, const std::vector<std::pair<int, int>>& allowed) {
        std::vector<char> mask(links_.size(), 0);
        for (auto [a, b] : allowed) {
            int id = link_id(a, b);
            if (id < 0) throw std::invalid_argument("restrict_object_links: no link " + std::to_string(a) + "->" + std::to_string(b));
            mask[id] = 1;
        }
        allowed_[object] = std::move(mask);
    }

    bool link_allowed(int link_id, int object) const {
        if (allowed_.empty()) return true;
        auto it = allowed_.find(object);
        return it == allowed_.end() ? true : it->second[link_id] != 0;
    }

    bool has_restrictions() const { return !allowed_.empty(); }

    double max_normalized_capacity(const Catalog& cat) const {
        double c = 0;
        for (const Link& l : links_)
            c = std::max(c, l.capacity_bits / static_cast<double>(cat.object_size_bits));
        return c;
    }

    /// Checks the invariants that need the catalog: no node may cache the
    /// whole catalog.
    void validate_against(const Catalog& cat) const {
        double kd = static_cast<double>(cat.object_count) * cat.object_size_bits;
        for (int n = 0; n < node_count_; ++n) {
            if (cache_bits_[n] >= kd)
                throw std::invalid_argument("node " + std::to_string(n) +
                                            " can cache the entire catalog (L_n >= K*D)");
        }
    }

private:
    static std::uint64_t key(int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }

    void add_link(int a, int b, double cap_bits, int lineno) {
        if (link_index_.count(key(a, b)))
            throw ParseError(lineno, "duplicate link " + std::to_string(a) + " " + std::to_string(b));
        int id = static_cast<int>(links_.size());
        links_.push_back({a, b, cap_bits});
        link_index_[key(a, b)] = id;
        out_links_[a].push_back(id);
        in_links_[b].push_back(id);
    }

    int node_count_ = 0;
    std::vector<Link> links_;
    std::unordered_map<std::uint64_t, int> link_index_;
    std::vector<std::vector<int>> out_links_;
    std::vector<std::vector<int>> in_links_;
    std::vector<double> cache_bits_;
    std::unordered_map<int, std::vector<char>> allowed_;
};

/// All-pairs hop distances and next hops, precomputed by BFS per node.
/// Next-hop ties break toward the lowest neighbor id.
class ShortestPaths {
public:
    explicit ShortestPaths(const Topology& topo) : topo_(&topo) {
        int n = topo.node_count();
        dist_.assign(static_cast<std::size_t>(n) * n, -1);
        for (int target = 0; target < n; ++target) {
            // BFS over reverse links gives distance-to-target
            std::queue<int> q;
            dist_at(target, target) = 0;
            q.push(target);
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int lid : topo.in_links(u)) {
                    int v = topo.link(lid).from;
                    if (dist_at(v, target) < 0) {
                        dist_at(v, target) = dist_at(u, target) + 1;
                        q.push(v);
                    }
                }
            }
        }
    }

    int distance(int from, int to) const { return dist_at(from, to); }

    int next_hop(int from, int to) const {
        if (from == to) return -1;
        int d = dist_at(from, to);
        if (d < 0) return -1;
        for (int lid : topo_->out_links(from)) {
            int b = topo_->link(lid).to;
            if (dist_at(b, to) == d - 1) return b; // out-links sorted by peer id
        }
        return -1;
    }

    bool connected() const {
        for (int i = 0; i < topo_->node_count(); ++i)
            for (int j = 0; j < topo_->node_count(); ++j)
                if (dist_at(i, j) < 0) return false;
        return true;
    }

private:
    int& dist_at(int from, int to) {
        return dist_[static_cast<std::size_t>(from) * topo_->node_count() + to];
    }
    int dist_at(int from, int to) const {
        return dist_[static_cast<std::size_t>(from) * topo_->node_count() + to];
    }

    const Topology* topo_;
    std::vector<int> dist_;
};

/// Draws each object's content source independently and uniformly over nodes.
inline std::vector<int> assign_sources(const Topology& topo, const Catalog& cat,
                                       std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, topo.node_count() - 1);
    std::vector<int> src(cat.object_count);
    for (int k = 0; k < cat.object_count; ++k) src[k] = pick(rng);
    return src;
}

} // namespace vipsim

#endif
