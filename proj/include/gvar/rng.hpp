#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gvar {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream tags keep the substreams of different pipeline stages disjoint.
enum class Stream : std::uint64_t { simulate = 1, dgp = 2, resample = 3, draw = 4, ftest = 5 };

/// Generator for the substream addressed by (master, tag, counters...). The
/// result depends only on the address, never on which worker asks for it.
inline Rng substream(std::uint64_t master, Stream tag, std::initializer_list<std::uint64_t> counters = {}) {
  std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  for (std::uint64_t c : counters) h = splitmix64(h ^ splitmix64(c + 0x3c6ef372fe94f82bULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

}  // namespace gvar
