#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

namespace dicke {

/// K_r = 2^{r(r-1)/2} prod_{k=1}^{r-1} k!
boost::multiprecision::cpp_int kr_closed_form(int r);

/// First-order (in delta) Hankel minors of the moments of a coherent state
/// at x evolved for time delta. Minors that need more than N+1 moments are
/// left empty.
struct LinearizedMinors {
  bool holds = true;  // every available minor >= -tolerance
  double det_H1 = 1.0;
  std::optional<double> det_H2;
  std::optional<double> det_Hbar1;
  std::optional<double> det_Hbar2;
};

LinearizedMinors linearized_minor_check(int emitters, double x, double delta,
                                        double tolerance = 1e-12);

enum class MinorKind { Plain, Shifted };
std::string to_string(MinorKind kind);
MinorKind parse_minor_kind(const std::string& s);

struct PrecisionContext {
  int digits = 60;
  /// Strictly decreasing deltas in (0, 1). Empty selects a geometric ladder
  /// of `rungs` values with ratio `ratio` starting from a delta scaled to the
  /// fastest rate of the moment generator.
  std::vector<double> delta_ladder;
  int rungs = 8;
  double ratio = 0.5;

  void validate() const;
};

struct LeadingOrderReport {
  int emitters = 0;
  int r = 0;
  MinorKind kind = MinorKind::Plain;
  double x = 0.0;
  double estimated_K = 0.0;
  double expected_K = 0.0;
  double relative_error = 0.0;
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;
  double fit_residual = 0.0;  // relative change of the last extrapolation step
};

/// Extracts the coefficient of delta^{r(r-1)/2} in det H_r (plain) or
/// det Hbar_r (shifted) after dividing out x^{r(r-1)} (1-x)^{r(r-1)/2}
/// or x^{r^2} (1-x)^{r(r+1)/2}, respectively. Plain needs r <= N/2 + 1,
/// shifted needs 2r <= N. Throws "increase digits" when the extrapolation
/// does not settle to 1e-6.
LeadingOrderReport leading_coefficient_extract(int emitters, int r,
                                               MinorKind kind, double x,
                                               const PrecisionContext& ctx = {});

}  // namespace dicke
