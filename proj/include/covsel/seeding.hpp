#pragma once

#include <cstdint>
#include <random>

namespace covsel {

// Stream tags keep engines independent when one integer seed drives several
// generators (data sampling, fold shuffling, graph layout).
inline constexpr std::uint32_t kStreamMvn = 0x4d564e31u;
inline constexpr std::uint32_t kStreamFolds = 0x464c4431u;
inline constexpr std::uint32_t kStreamLayout = 0x47454f31u;

inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{stream, static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace covsel
