#pragma once

#include <stdexcept>
#include <string>

namespace oerq {

// Invalid input data or arguments (bad file, degenerate population, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace oerq
