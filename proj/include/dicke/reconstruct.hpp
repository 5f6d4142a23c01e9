#pragma once

#include <span>
#include <vector>

#include "dicke/bernstein.hpp"
#include "dicke/decomposition.hpp"
#include "dicke/hausdorff.hpp"
#include "dicke/population.hpp"

namespace dicke {

struct ReconstructOptions {
  double rank_tol = 1e-10;      // singular values below rank_tol * sigma_max are zero
  double merge_tol = Decomposition::kDefaultMergeTol;
  double root_tol = 1e-8;       // |imag| and [0,1] overshoot accepted for roots
  double weight_tol = 1e-8;     // weights in [-weight_tol, 0) clamp to zero
  double residual_tol = 1e-8;   // moment and population residual on success
  double tol_psd = kDefaultTolPsd;
};

/// Recovers atoms (w_i, eps_i) with sum_i w_i eps_i^k = m_k.
///
/// The rank r is first read off the Hankel matrix by singular-value
/// thresholding, then raised until both the moment residual and the residual
/// of the induced populations are below residual_tol. For even N and
/// r = N/2 + 1 one node is fixed at 0 and the remaining r - 1 are found from
/// the shifted moments m_{k+1}.
///
/// Throws InfeasibleError with "infeasible: moments not representable on
/// [0,1]", "negative weight" or "rank detection failed".
Decomposition reconstruct_decomposition(const MomentVector& m,
                                        const ReconstructOptions& opt = {});

/// max_k |m_k - sum_i w_i eps_i^k|
double moment_residual(const MomentVector& m, const Decomposition& d);

/// max_k |p_k - sum_i w_i b_{N,k}(eps_i)|
double decomposition_residual(const PopulationVector& p, const Decomposition& d);

/// Populations of the mixture sum_i w_i b_{N,.}(eps_i).
PopulationVector decomposition_populations(const Decomposition& d);

/// Evolves the fully excited state on `times` and reconstructs at each grid
/// point. Atoms are ordered by eps, largest first.
std::vector<Decomposition> trajectory_decomposition(
    int emitters, std::span<const double> times,
    const ReconstructOptions& opt = {});

}  // namespace dicke
