#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ldcx {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed literal, missing key or out-of-range value in a parameter document.
class ParseError : public Error {
 public:
  ParseError(std::string key, std::string raw, const std::string& what)
      : Error(key.empty() ? what : "'" + key + "' = \"" + raw + "\": " + what),
        key_(std::move(key)),
        raw_(std::move(raw)) {}

  const std::string& key() const noexcept { return key_; }
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string key_;
  std::string raw_;
};

class NotEquilibriumError : public Error {
 public:
  explicit NotEquilibriumError(double residual)
      : Error("not an equilibrium (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateBoundError : public Error {
 public:
  DegenerateBoundError() : Error("degenerate bound: a - b - 1 = 0") {}
};

class DivergentOrbitError : public Error {
 public:
  explicit DivergentOrbitError(std::int64_t step)
      : Error("divergent orbit at step " + std::to_string(step)), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldcx
