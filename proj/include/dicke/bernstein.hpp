#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "dicke/population.hpp"

namespace dicke {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Raw moment candidates m_0..m_N of a measure on [0,1].
///
/// Stored in long double so that the population/moment round trip survives
/// the growth of the inverse transform. `ill_conditioned()` is set when the
/// transform used to produce the vector had an estimated condition number
/// above TransformMatrix::kConditionWarning.
class MomentVector {
 public:
  static constexpr double kNormTol = 1e-10;

  explicit MomentVector(std::vector<long double> m, bool ill_conditioned = false);
  static MomentVector from_doubles(std::span<const double> m);

  int emitters() const { return static_cast<int>(m_.size()) - 1; }
  std::size_t size() const { return m_.size(); }
  std::span<const long double> values() const { return m_; }
  long double operator[](std::size_t k) const { return m_[k]; }
  std::vector<double> to_doubles() const;
  bool ill_conditioned() const { return ill_conditioned_; }

 private:
  std::vector<long double> m_;
  bool ill_conditioned_ = false;
};

/// B[k][k'] = C(k',k)/C(N,k) and its inverse, both rounded once from exact
/// rationals.
struct TransformMatrix {
  static constexpr double kConditionWarning = 1e12;

  int emitters = 0;
  MatrixL B;
  MatrixL Binv;
  double condition = 1.0;  // ||B||_1 ||Binv||_1
  bool ill_conditioned() const { return condition > kConditionWarning; }
};

/// Cached per N; the reference stays valid for the lifetime of the process.
const TransformMatrix& transform_matrix(int emitters);

MomentVector populations_to_moments(const PopulationVector& p);
PopulationVector moments_to_populations(const MomentVector& m);

/// dm/dt = Mbar m: diagonal -beta_k, superdiagonal (k,k+1) = lambda_k.
struct MomentGenerator {
  int emitters = 0;
  Eigen::MatrixXd Mbar;
  std::vector<double> beta;    // k(N-k+1)
  std::vector<double> lambda;  // k(N-k)
};

MomentGenerator moment_generator(int emitters);

/// Bernstein profile p_k = C(N,k) eps^k (1-eps)^(N-k).
PopulationVector coherent_populations(int emitters, double eps);

/// Dicke-basis density matrix of the product state
/// (sqrt(1-eps)|g> + e^{i phi} sqrt(eps)|e>)^{(x)N}.
Eigen::MatrixXcd product_density(int emitters, double eps, double phi);

/// Average of product_density over phi_j = 2 pi j / phases, j < phases.
/// phases <= 0 selects N+1, the smallest count that removes every coherence.
Eigen::MatrixXcd phase_averaged_product_density(int emitters, double eps,
                                                int phases = 0);

}  // namespace dicke
