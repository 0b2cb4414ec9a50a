#pragma once

#include <stdexcept>
#include <string>

namespace varns {

enum class ErrorKind {
  invalid_argument,
  grid_mismatch,
  non_convergence,
  undefined_ratio,
  io,
  solver,
};

/// Single exception type for the library; `kind()` lets callers (mostly the
/// CLI) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, const std::string& message,
                    ErrorKind kind = ErrorKind::invalid_argument) {
  if (!condition) throw Error(kind, message);
}

}  // namespace varns
