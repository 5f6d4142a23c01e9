#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dicke/decomposition.hpp"
#include "dicke/population.hpp"

namespace dicke {

/// Rates h_k = k(N-k+1), k = 0..N.
std::vector<double> rate_coefficients(int emitters);

/// Generator of the superradiant rate equations dp/dt = M p.
struct RateMatrix {
  int emitters = 0;
  Eigen::MatrixXd entries;  // diagonal -h_k, superdiagonal (k-1,k) = h_k
  std::vector<double> h;
};

RateMatrix rate_matrix(int emitters);

/// exp(M t) p0, with Gamma = 1. Entries within kEvolveClampTol below zero are
/// clamped.
PopulationVector evolve(const PopulationVector& p0, double t);

inline constexpr double kEvolveClampTol = 1e-10;

struct Trajectory {
  std::vector<double> times;
  std::vector<PopulationVector> states;
};

/// States on a strictly increasing grid, stepped with exp(M dt).
Trajectory evolve_trajectory(const PopulationVector& p0,
                             std::span<const double> times);

/// Radiated intensity sum_k h_k p_k.
double intensity(const PopulationVector& p);

/// sum_i w_i [N eps_i + N(N-1) eps_i (1-eps_i)]
double intensity_from_decomposition(int emitters, const Decomposition& d);

}  // namespace dicke
