#pragma once

#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schoenberg {

using Complex = std::complex<double>;

/// Library-wide numerical tolerances. All are relative to the scale factor
/// named at the point of use.
struct Tolerances {
  double root = 1e-9;    ///< residual bound for computed roots
  double center = 1e-10; ///< centroid residual accepted as "centered"
  double eq = 1e-8;      ///< equality flag for inequality reports
};

/// Threshold above which a mathematical bound of value 1 counts as exceeded.
inline constexpr double counterexample_margin = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericConsistencyError : public Error {
 public:
  using Error::Error;
};

class RejectedStart : public Error {
 public:
  using Error::Error;
};

/// Raised by the root finder when the iteration cap is reached before every
/// root meets its residual bound. Carries the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<Complex> best_iterate,
                   double residual)
      : Error(what), best_iterate_(std::move(best_iterate)), residual_(residual) {}

  const std::vector<Complex>& best_iterate() const noexcept { return best_iterate_; }
  /// Worst relative residual |p(r)| / scale(r) over the iterate.
  double residual() const noexcept { return residual_; }

 private:
  std::vector<Complex> best_iterate_;
  double residual_;
};

}  // namespace schoenberg
