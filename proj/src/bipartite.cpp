#include "dicke/bipartite.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dicke {
namespace {

namespace mp = boost::multiprecision;

constexpr double kMarginalTol = 1e-10;

// C(n, k) in long double; exact for the sizes used here.
long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

}  // namespace

TwoSpinCoefficients two_spin_coefficients(int emitters, int k) {
  if (emitters < 2) throw Error("two-spin reduction needs N >= 2");
  if (k < 0 || k > emitters) throw Error("Dicke level out of range");
  const mp::cpp_rational den(emitters * static_cast<long long>(emitters - 1));
  const long long n = emitters;
  const mp::cpp_rational a = mp::cpp_rational((n - k) * (n - k - 1)) / den;
  const mp::cpp_rational b = mp::cpp_rational(k * (n - k)) / den;
  const mp::cpp_rational d = mp::cpp_rational(static_cast<long long>(k) * (k - 1)) / den;
  return {a.convert_to<double>(), b.convert_to<double>(), d.convert_to<double>()};
}

TwoSpinState two_spin_state(const PopulationVector& p) {
  const int n = p.emitters();
  if (n < 2) throw Error("two-spin reduction needs N >= 2");
  TwoSpinState s;
  for (int k = 0; k <= n; ++k) {
    const TwoSpinCoefficients c = two_spin_coefficients(n, k);
    const double pk = p[static_cast<std::size_t>(k)];
    s.A += pk * c.a;
    s.B += pk * c.b;
    s.D += pk * c.d;
  }
  return s;
}

double two_spin_negativity(const TwoSpinState& s) {
  const double diff = s.A - s.D;
  const double lam = (std::sqrt(diff * diff + 4.0 * s.B * s.B) - (s.A + s.D)) / 2.0;
  return std::max(0.0, lam);
}

double delta_witness(const TwoSpinState& s) { return s.A * s.D - s.B * s.B; }

std::vector<double> particle_loss_marginal(const PopulationVector& p, int n) {
  const int big = p.emitters();
  if (n < 1 || n > big) throw Error("reduced size n out of range");
  std::vector<double> q(p.values().begin(), p.values().end());
  for (int cur = big; cur > n; --cur) {
    std::vector<double> next(static_cast<std::size_t>(cur), 0.0);
    for (int j = 0; j < cur; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      next[sj] = (static_cast<double>(cur - j) / cur) * q[sj] +
                 (static_cast<double>(j + 1) / cur) * q[sj + 1];
    }
    q.swap(next);
  }
  return q;
}

std::vector<double> hypergeometric_marginal(const PopulationVector& p, int n) {
  const int big = p.emitters();
  if (n < 1 || n > big) throw Error("reduced size n out of range");
  std::vector<double> q(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    long double s = 0.0L;
    for (int k = j; k <= big - n + j; ++k) {
      s += p[static_cast<std::size_t>(k)] * binom(n, j) * binom(big - n, k - j) /
           binom(big, k);
    }
    q[static_cast<std::size_t>(j)] = static_cast<double>(s);
  }
  return q;
}

ReducedDickeMixture reduced_dicke_mixture(const PopulationVector& p, int n) {
  std::vector<double> rec = particle_loss_marginal(p, n);
  const std::vector<double> closed = hypergeometric_marginal(p, n);
  for (std::size_t j = 0; j < rec.size(); ++j) {
    if (std::abs(rec[j] - closed[j]) > kMarginalTol) {
      std::ostringstream os;
      os << "partial trace paths disagree at j=" << j << ": " << rec[j] << " vs "
         << closed[j];
      throw Error(os.str());
    }
    rec[j] = std::max(rec[j], 0.0);
  }
  const double total = std::accumulate(rec.begin(), rec.end(), 0.0);
  for (double& v : rec) v /= total;
  return {n, std::move(rec)};
}

double bipartition_negativity(const ReducedDickeMixture& q, int n1,
                              double tol_psd) {
  const int n = q.n;
  if (n > 64) throw Error("bipartition too large");
  if (static_cast<int>(q.q.size()) != n + 1) throw Error("reduced mixture size mismatch");
  if (n1 < 1 || n1 >= n) throw Error("split n1 must satisfy 1 <= n1 < n");
  const int n2 = n - n1;

  auto coeff = [&](int j, int s) -> long double {
    if (s < 0 || s > n1 || j - s < 0 || j - s > n2) return 0.0L;
    return std::sqrt(binom(n1, s) * binom(n2, j - s) / binom(n, j));
  };

  // rho = sum_j q_j |D_j><D_j| with |D_j> = sum_s c_{j,s} |s, j-s>, so
  // <s,t| rho^T2 |u,v> = <s,v| rho |u,t> = q_j c_{j,s} c_{j,u}, j = s+v = u+t.
  // The transpose is block diagonal in d = s - t.
  long double norm_max = 0.0L;
  std::vector<VectorL> spectra;
  for (int d = -n2; d <= n1; ++d) {
    std::vector<int> basis;
    for (int s = std::max(0, d); s <= std::min(n1, n2 + d); ++s) basis.push_back(s);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    MatrixL blk = MatrixL::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        const int s = basis[static_cast<std::size_t>(a)];
        const int u = basis[static_cast<std::size_t>(b)];
        const int j = s + u - d;
        if (j < 0 || j > n) continue;
        blk(a, b) = static_cast<long double>(q.q[static_cast<std::size_t>(j)]) *
                    coeff(j, s) * coeff(j, u);
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixL> es(blk, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("eigenvalue solver failed");
    norm_max = std::max(norm_max, es.eigenvalues().cwiseAbs().maxCoeff());
    spectra.push_back(es.eigenvalues());
  }
  long double neg_sum = 0.0L;
  const long double threshold = static_cast<long double>(tol_psd) * (1.0L + norm_max);
  for (const VectorL& e : spectra) {
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      if (e[i] < -threshold) neg_sum -= e[i];
    }
  }
  return static_cast<double>(neg_sum);
}

}  // namespace dicke
