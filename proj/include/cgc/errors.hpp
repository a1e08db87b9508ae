#pragma once

#include <stdexcept>
#include <string>

namespace cgc {

// Shape disagreement between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside an operation's mathematical domain (e.g. log of a non-positive value).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A NaN or Inf appeared in a computed value.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cgc
