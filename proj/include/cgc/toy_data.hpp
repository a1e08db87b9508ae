#pragma once

#include <cstdint>
#include <vector>

#include "cgc/types.hpp"

namespace cgc {

// Deterministic synthetic corpus: templated "TIME , FIRST LAST VERBs a NOUN on
// TOPIC in the PLACE PLACE ." sentences with a fixed dependency parse, one of
// four answer types, and a templated question that mixes passage words (copy
// candidates) with question-only words (generated).
std::vector<AnnotatedExample> make_toy_data(std::size_t n, std::uint64_t seed);

}  // namespace cgc
