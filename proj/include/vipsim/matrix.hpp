#ifndef VIPSIM_MATRIX_HPP_
#define VIPSIM_MATRIX_HPP_

#include <cstddef>
#include <vector>

namespace vipsim {

/// Dense row-major (node, object) table; the shape shared by every
/// per-node per-object quantity in the simulator.
template <typename T>
class NodeObjectMatrix {
public:
    NodeObjectMatrix() = default;
    NodeObjectMatrix(int nodes, int objects, T init = T{})
        : nodes_(nodes), objects_(objects),
          data_(static_cast<std::size_t>(nodes) * objects, init) {}

    int nodes() const { return nodes_; }
    int objects() const { return objects_; }

    T& operator()(int n, int k) { return data_[idx(n, k)]; }
    const T& operator()(int n, int k) const { return data_[idx(n, k)]; }

    void fill(T v) { data_.assign(data_.size(), v); }

    T sum() const {
        T s{};
        for (const T& x : data_) s += x;
        return s;
    }

    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    bool operator==(const NodeObjectMatrix&) const = default;

private:
    std::size_t idx(int n, int k) const {
        return static_cast<std::size_t>(n) * objects_ + k;
    }

    int nodes_ = 0;
    int objects_ = 0;
    std::vector<T> data_;
};

} // namespace vipsim

#endif
