#ifndef TSPLAB_RNG_HPP
#define TSPLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace tsplab {

using Rng = std::mt19937_64;

// splitmix64; used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combine a master seed with a stream id (trial index, copy id, ...) so that
/// parallel consumers get independent, reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace tsplab

#endif
