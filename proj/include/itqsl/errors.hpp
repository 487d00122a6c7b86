#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace itqsl {

// Error taxonomy for the whole toolkit. Kinds group into the CLI exit-code
// classes: input validation / config -> 2, numerical failure -> 3, I/O -> 4.
enum class ErrorKind {
  zero_vector,
  non_finite_entry,
  dimension_too_small,
  dimension_mismatch,
  not_hermitian,
  non_positive_gap,
  parse,
  schema,
  eig_failure,
  numerical_inconsistency,
  step_size_too_large,
  vanishing_state,
  grid_too_coarse,
  degenerate_trajectory,
  zero_overlap,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::zero_vector:
      case ErrorKind::non_finite_entry:
      case ErrorKind::dimension_too_small:
      case ErrorKind::dimension_mismatch:
      case ErrorKind::not_hermitian:
      case ErrorKind::non_positive_gap:
      case ErrorKind::parse:
      case ErrorKind::schema:
        return 2;
      case ErrorKind::io:
        return 4;
      default:
        return 3;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace itqsl
