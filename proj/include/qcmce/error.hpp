#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcmce {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModulusMismatch : public Error {
 public:
  ModulusMismatch(std::size_t a, std::size_t b)
      : Error("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised by ring_inv; carries the support of gcd(u, x^p - 1).
class NotInvertible : public Error {
 public:
  explicit NotInvertible(std::vector<std::size_t> gcd_support)
      : Error("polynomial is not invertible modulo x^p - 1 (gcd degree " +
              std::to_string(gcd_support.empty() ? 0 : gcd_support.back()) + ")"),
        gcd_support_(std::move(gcd_support)) {}

  const std::vector<std::size_t>& gcd_support() const noexcept { return gcd_support_; }

 private:
  std::vector<std::size_t> gcd_support_;
};

class NotBlockCirculant : public Error {
 public:
  NotBlockCirculant(std::size_t block_row, std::size_t block_col)
      : Error("block (" + std::to_string(block_row) + ", " + std::to_string(block_col) +
              ") is not circulant"),
        block_row_(block_row),
        block_col_(block_col) {}

  std::size_t block_row() const noexcept { return block_row_; }
  std::size_t block_col() const noexcept { return block_col_; }

 private:
  std::size_t block_row_;
  std::size_t block_col_;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

class InvalidField : public Error {
 public:
  using Error::Error;
};

class DegenerateParameters : public Error {
 public:
  using Error::Error;
};

class InfeasibleParameters : public Error {
 public:
  using Error::Error;
};

class DecodeFailure : public Error {
 public:
  explicit DecodeFailure(std::size_t iterations)
      : Error("bit-flipping decoder did not converge after " + std::to_string(iterations) +
              " iterations"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

class AttackFailed : public Error {
 public:
  AttackFailed(const std::string& what, std::size_t nullspace_dim)
      : Error(what), nullspace_dim_(nullspace_dim) {}

  std::size_t nullspace_dim() const noexcept { return nullspace_dim_; }

 private:
  std::size_t nullspace_dim_;
};

class StrategyFailure : public Error {
 public:
  using Error::Error;
};

/// A multi-stage attack stopped part way; `stage` names the step that failed.
class PartialResult : public Error {
 public:
  PartialResult(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace qcmce
