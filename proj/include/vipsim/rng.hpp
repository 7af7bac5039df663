#ifndef VIPSIM_RNG_HPP_
#define VIPSIM_RNG_HPP_

#include <cstdint>
#include <random>

namespace vipsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Splitting rule for independent substreams: stream i of a master seed is
/// two splitmix64 rounds over (master XOR (i+1)*golden-ratio). Adding nodes
/// or streams never perturbs existing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Reserved stream ids within one run.
constexpr std::uint64_t kStreamSources = 1;
constexpr std::uint64_t kStreamPolicy = 2;      // randomized cache policies
constexpr std::uint64_t kStreamTrafficBase = 100; // + node id

using Rng = std::mt19937_64;

} // namespace vipsim

#endif
