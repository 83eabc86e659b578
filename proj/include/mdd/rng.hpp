#pragma once

#include <cstdint>
#include <random>

namespace mdd {

using Engine = std::mt19937_64;

/// Stream identifiers for derive_seed. Distinct tags keep the fixed design
/// draws, replication draws and bootstrap multipliers from ever sharing a stream.
enum class StreamTag : std::uint64_t {
  replication = 0x7265706cULL,
  fixed_design = 0x66697864ULL,
  bootstrap = 0x626f6f74ULL,
  screening = 0x7363726eULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based derivation: the seed for item `index` of stream `tag` depends
/// only on (seed, tag, index), never on how many other items were drawn first.
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag))) + splitmix64(index + 1));
}

inline Engine make_engine(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(derive_seed(seed, tag, index)),
                    static_cast<std::uint32_t>(derive_seed(seed, tag, index) >> 32)};
  return Engine(seq);
}

}  // namespace mdd
