#pragma once

#include <stdexcept>
#include <string>

namespace homocycle {

// Malformed input document or configuration.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph fails a structural precondition (disconnected, bipartite, reducible shift).
struct InadmissibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested computation exceeds the configured memory budget or table depth.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal invariant violated; indicates a bug, not bad input.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace homocycle
