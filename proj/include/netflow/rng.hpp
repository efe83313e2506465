#ifndef NETFLOW_RNG_HPP
#define NETFLOW_RNG_HPP

#include <cstdint>
#include <random>

namespace netflow {

// Seeding discipline. All randomness flows through std::mt19937_64 (its
// output sequence is pinned by the standard, so results are bit-portable
// across platforms). User-facing seeds are first passed through the
// splitmix64 finalizer so that small consecutive seeds land far apart in
// state space, and per-graph substreams inside a scenario are derived by
// jumping the splitmix64 counter rather than by arithmetic on the raw seed.

namespace detail {

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// k-th substream seed of a master seed: the k-th output of the splitmix64
// generator started at `seed` (gamma = golden ratio increment).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::splitmix64_finalize(seed +
                                     (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 make_engine(std::uint64_t seed,
                                   std::uint64_t stream = 0) {
  return std::mt19937_64(derive_seed(seed, stream));
}

// Canonical double in [0, 1): top 53 bits of one engine draw. Used instead
// of std::uniform_real_distribution, whose algorithm the standard leaves
// unspecified.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection-free (bias < 2^-53 for the n used
// here); deterministic across platforms, unlike uniform_int_distribution.
inline int uniform_index(std::mt19937_64& eng, int n) {
  int i = static_cast<int>(uniform01(eng) * n);
  return i < n ? i : n - 1;
}

}  // namespace netflow

#endif
