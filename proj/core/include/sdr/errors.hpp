#pragma once

#include <stdexcept>
#include <string>

namespace sdr {

enum class ErrorKind {
  dimension_mismatch,
  invalid_index,
  invalid_argument,
  non_convergence,
  divergence,
  config,
  io,
};

/// Structured error carried by every failure path of the library.
/// The kind is stable (tests dispatch on it); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace sdr
