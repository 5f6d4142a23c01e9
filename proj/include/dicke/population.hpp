#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a moment vector admits no representing measure on [0,1]
/// (or the reconstruction broke down numerically trying to find one).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Probability vector over the Dicke levels k = 0..N of N emitters.
///
/// Entries slightly below zero (down to -tol_neg) are clamped to zero and the
/// vector is renormalized; anything more negative, or a total that differs
/// from one by more than kNormTol, is rejected.
class PopulationVector {
 public:
  static constexpr double kDefaultNegTol = 1e-12;
  static constexpr double kNormTol = 1e-10;

  explicit PopulationVector(std::vector<double> p,
                            double tol_neg = kDefaultNegTol,
                            double tol_norm = kNormTol);

  static PopulationVector ground(int emitters);
  static PopulationVector fully_excited(int emitters);
  static PopulationVector dicke(int emitters, int k);

  int emitters() const { return emitters_; }
  std::size_t size() const { return p_.size(); }
  std::span<const double> values() const { return p_; }
  double operator[](std::size_t k) const { return p_[k]; }

 private:
  int emitters_ = 0;
  std::vector<double> p_;
};

}  // namespace dicke
