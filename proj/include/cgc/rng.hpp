#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cgc {

using Rng = std::mt19937_64;

// Derives an independent generator for a named purpose ("init", "dropout",
// "gumbel", "shuffle", ...) from the single run seed. Changing how many draws
// one stream makes never perturbs another.
Rng substream(std::uint64_t seed, std::string_view name);

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace cgc
