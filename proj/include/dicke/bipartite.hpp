#pragma once

#include <vector>

#include "dicke/hausdorff.hpp"
#include "dicke/population.hpp"

namespace dicke {

// Two-emitter marginal of a diagonal Dicke mixture:
//   rho_12 = A |gg><gg| + B (|ge>+|eg>)(<ge|+<eg|) + D |ee><ee|.

struct TwoSpinCoefficients {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

TwoSpinCoefficients two_spin_coefficients(int emitters, int k);

struct TwoSpinState {
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
};

TwoSpinState two_spin_state(const PopulationVector& p);
double two_spin_negativity(const TwoSpinState& s);
double delta_witness(const TwoSpinState& s);

/// Dicke-level distribution of n of the N spins.
struct ReducedDickeMixture {
  int n = 0;
  std::vector<double> q;
};

/// Partial trace to n spins by N - n single-particle-loss steps, checked
/// against the hypergeometric marginal to 1e-10.
ReducedDickeMixture reduced_dicke_mixture(const PopulationVector& p, int n);

// The two paths behind reduced_dicke_mixture.
std::vector<double> particle_loss_marginal(const PopulationVector& p, int n);
std::vector<double> hypergeometric_marginal(const PopulationVector& p, int n);

/// Negativity of the split (n1, n - n1) of the reduced mixture, computed in
/// the symmetric-block basis. Requires 1 <= n1 < n <= 64.
double bipartition_negativity(const ReducedDickeMixture& q, int n1,
                              double tol_psd = kDefaultTolPsd);

}  // namespace dicke
