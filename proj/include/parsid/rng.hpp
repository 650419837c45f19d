#ifndef PARSID_RNG_HPP_
#define PARSID_RNG_HPP_

#include <cstdint>
#include <random>

namespace parsid {

// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream: same (seed, tags...) always yields the same engine.
// Experiment cells each get their own stream so parallel arms never share state.
template <typename... Tags>
std::mt19937_64 make_rng(std::uint64_t seed, Tags... tags) {
    std::uint64_t s = mix_seed(seed);
    ((s = mix_seed(s ^ static_cast<std::uint64_t>(tags))), ...);
    return std::mt19937_64(s);
}

}  // namespace parsid

#endif  // PARSID_RNG_HPP_
