#pragma once

#include <stdexcept>
#include <string>
#include <vector>
#include <complex>

namespace sgspec {

enum class ErrorKind {
  Domain,
  Degeneracy,
  DegreeOverflow,
  Accuracy,
  Proximity,
  Refinement,
  Geometry,
  Rank,
  Precondition,
  IllConditioned,
  Divergence,
  Revoked,
  NotFound,
  DoublePoint,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that the CLI can map
// it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Root finding or quadrature that could not reach the requested tolerance.
// The best available estimates travel with the exception.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, std::vector<std::complex<double>> best)
      : Error(ErrorKind::Accuracy, what), best_(std::move(best)) {}
  const std::vector<std::complex<double>>& best() const noexcept { return best_; }

 private:
  std::vector<std::complex<double>> best_;
};

}  // namespace sgspec
