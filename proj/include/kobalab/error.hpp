#pragma once

#include <stdexcept>
#include <string>

namespace kobalab {

/// Raised for contract violations (bad inputs, failed preconditions) and for
/// numerical evaluation failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kobalab
