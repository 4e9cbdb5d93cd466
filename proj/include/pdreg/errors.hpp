#pragma once

#include <stdexcept>
#include <string>

namespace pdreg {

// Malformed input: unknown symbols, syntax errors, invalid configurations.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A desk-scale guardrail (truncation depth, region size, ...) was exceeded.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdreg
