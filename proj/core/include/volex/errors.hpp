#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volex {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- expression DSL ----

struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at offset " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  std::size_t offset;
};

struct UnknownSymbol : Error {
  explicit UnknownSymbol(const std::string& name)
      : Error("unknown symbol '" + name + "'"), symbol(name) {}
  std::string symbol;
};

/// Evaluation outside a function's domain (log of a non-positive value,
/// fractional power of a negative base, ...).
struct DomainError : Error {
  using Error::Error;
};

/// NaN or infinity produced during evaluation.
struct NonFinite : Error {
  using Error::Error;
};

// ---- geometry ----

struct SingularMetric : Error {
  using Error::Error;
};

struct SignatureMismatch : Error {
  using Error::Error;
};

// ---- flow ----

struct LeftDomain : Error {
  LeftDomain(const std::string& what, double exit_time_estimate)
      : Error(what + " (exit time ~" + std::to_string(exit_time_estimate) + ")"),
        exit_time(exit_time_estimate) {}
  double exit_time;
};

// ---- integration ----

struct NonCompactDomain : Error {
  using Error::Error;
};

struct FaceNotSlice : Error {
  using Error::Error;
};

// ---- lorentz ----

/// Metric is not of the shift-free lapse form -N^2 dt^2 + h_ij dx^i dx^j
/// with respect to the requested slice coordinate.
struct NotLapseForm : Error {
  using Error::Error;
};

// ---- scenarios / reports ----

struct ParseError : Error {
  ParseError(const std::string& what, std::string key)
      : Error("parse error at " + key + ": " + what), key_path(std::move(key)) {}
  std::string key_path;
};

struct SchemaError : Error {
  SchemaError(const std::string& what, std::string key)
      : Error("schema error at " + key + ": " + what), key_path(std::move(key)) {}
  std::string key_path;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace volex
