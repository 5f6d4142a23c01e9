#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit tests.

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dicke/decomposition.hpp"
#include "dicke/population.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Flat Dirichlet sample of length n+1; with `sparse` about half the
/// entries are zeroed to reach the simplex faces.
inline dicke::PopulationVector random_population(Rng& rng, int n, bool sparse = false) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(uniform(rng, 1e-300, 1.0));
    if (sparse && uniform(rng) < 0.5) v = 0.0;
    total += v;
  }
  if (total == 0.0) {
    p[static_cast<std::size_t>(uniform_int(rng, 0, n))] = 1.0;
    total = 1.0;
  }
  for (double& v : p) v /= total;
  return dicke::PopulationVector(std::move(p));
}

/// r atoms with pairwise gaps >= min_gap and weights bounded below.
inline std::vector<dicke::Atom> random_atoms(Rng& rng, int r, double min_gap,
                                             double min_weight = 0.05) {
  std::vector<double> eps;
  while (static_cast<int>(eps.size()) < r) {
    const double e = uniform(rng);
    bool ok = true;
    for (double x : eps) ok = ok && std::abs(x - e) >= min_gap;
    if (ok) eps.push_back(e);
  }
  std::vector<double> w(static_cast<std::size_t>(r));
  double total = 0.0;
  for (double& v : w) {
    v = min_weight + uniform(rng);
    total += v;
  }
  std::vector<dicke::Atom> atoms;
  for (int i = 0; i < r; ++i) {
    atoms.push_back({w[static_cast<std::size_t>(i)] / total, eps[static_cast<std::size_t>(i)]});
  }
  return atoms;
}

/// C(n, k) as double, exact for small n.
inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

/// Adaptive Dormand-Prince integration of dp_k/dt = h_{k+1}p_{k+1} - h_k p_k.
inline std::vector<double> ode_evolve(const std::vector<double>& p0, double t) {
  using State = std::vector<double>;
  const int n = static_cast<int>(p0.size()) - 1;
  auto h = [n](int k) { return static_cast<double>(k) * (n - k + 1); };
  auto rhs = [&](const State& p, State& dp, double) {
    for (int k = 0; k <= n; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      dp[sk] = -h(k) * p[sk] + (k < n ? h(k + 1) * p[sk + 1] : 0.0);
    }
  };
  State p = p0;
  if (t > 0.0) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, p, 0.0, t, t / 1000.0);
  }
  return p;
}

/// Symmetric Dicke vector |D_k> of n qubits in the 2^n product basis;
/// bit b of the index is qubit b, 1 = excited.
inline Eigen::VectorXd dicke_vector(int n, int k) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const double norm = 1.0 / std::sqrt(choose(n, k));
  for (std::size_t i = 0; i < dim; ++i) {
    if (__builtin_popcountll(i) == k) v[static_cast<Eigen::Index>(i)] = norm;
  }
  return v;
}

/// sum_k p_k |D_k><D_k| in the 2^n basis.
inline Eigen::MatrixXd dicke_mixture_density(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size()) - 1;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) {
    const Eigen::VectorXd d = dicke_vector(n, k);
    rho += p[static_cast<std::size_t>(k)] * d * d.transpose();
  }
  return rho;
}

/// Traces out the highest `drop` qubits.
inline Eigen::MatrixXd trace_out_high(const Eigen::MatrixXd& rho, int n, int drop) {
  const Eigen::Index keep = Eigen::Index{1} << (n - drop);
  const Eigen::Index env = Eigen::Index{1} << drop;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(keep, keep);
  for (Eigen::Index a = 0; a < keep; ++a) {
    for (Eigen::Index b = 0; b < keep; ++b) {
      double s = 0.0;
      for (Eigen::Index e = 0; e < env; ++e) s += rho(a + e * keep, b + e * keep);
      out(a, b) = s;
    }
  }
  return out;
}

/// Negativity of rho on n qubits with the highest n2 qubits transposed.
inline double brute_negativity(const Eigen::MatrixXd& rho, int n, int n2) {
  const Eigen::Index low = Eigen::Index{1} << (n - n2);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd pt(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index ia = i % low, ib = i / low, ja = j % low, jb = j / low;
      pt(i, j) = rho(ia + jb * low, ja + ib * low);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (es.eigenvalues()[i] < -1e-13) s -= es.eigenvalues()[i];
  }
  return s;
}

}  // namespace testing
