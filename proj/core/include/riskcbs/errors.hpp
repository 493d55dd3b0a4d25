#pragma once

#include <stdexcept>
#include <string>

namespace riskcbs {

/// Synthetic instance generation could not satisfy its constraints within
/// the bounded retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance file is malformed or violates a graph invariant.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace riskcbs
