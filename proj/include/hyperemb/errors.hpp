#pragma once

#include <stdexcept>
#include <string>

namespace hyperemb {

// Precondition / contract failures. CLI maps these to exit code 1.
struct ContractViolation : std::invalid_argument {
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed files / I/O. CLI maps these to exit code 2.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace hyperemb
