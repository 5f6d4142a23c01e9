#include "dicke/bernstein.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "dicke/dicke_core.hpp"

namespace dicke {
namespace {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;
using Wide = mp::cpp_bin_float_50;

constexpr long double kSimplexTol = 1e-6L;

long double round_rational(const Rational& q) {
  const Wide v = Wide(mp::numerator(q)) / Wide(mp::denominator(q));
  return v.convert_to<long double>();
}

std::vector<std::vector<mp::cpp_int>> pascal(int n) {
  std::vector<std::vector<mp::cpp_int>> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    auto& row = c[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) {
      row[static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return c;
}

long double one_norm(const MatrixL& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

std::unique_ptr<TransformMatrix> build_transform(int n) {
  const auto c = pascal(n);
  const std::size_t dim = static_cast<std::size_t>(n) + 1;
  std::vector<std::vector<Rational>> b(dim, std::vector<Rational>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t kp = k; kp < dim; ++kp) {
      b[k][kp] = Rational(c[kp][k], c[dim - 1][k]);
    }
  }
  // Column-wise back-substitution for the upper-triangular inverse.
  std::vector<std::vector<Rational>> inv(dim, std::vector<Rational>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t ii = j + 1; ii-- > 0;) {
      Rational s = (ii == j) ? Rational(1) : Rational(0);
      for (std::size_t l = ii + 1; l <= j; ++l) s -= b[ii][l] * inv[l][j];
      inv[ii][j] = s / b[ii][ii];
    }
  }

  auto t = std::make_unique<TransformMatrix>();
  t->emitters = n;
  t->B = MatrixL::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  t->Binv = t->B;
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t kp = k; kp < dim; ++kp) {
      const auto i = static_cast<Eigen::Index>(k);
      const auto j = static_cast<Eigen::Index>(kp);
      t->B(i, j) = round_rational(b[k][kp]);
      t->Binv(i, j) = round_rational(inv[k][kp]);
    }
  }
  t->condition = static_cast<double>(one_norm(t->B) * one_norm(t->Binv));
  return t;
}

}  // namespace

MomentVector::MomentVector(std::vector<long double> m, bool ill_conditioned)
    : m_(std::move(m)), ill_conditioned_(ill_conditioned) {
  if (m_.size() < 2) throw Error("need at least two moments");
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (!std::isfinite(m_[k])) {
      throw Error("moment vector has a non-finite entry at k=" +
                  std::to_string(k));
    }
  }
  if (std::abs(m_[0] - 1.0L) > kNormTol) {
    std::ostringstream os;
    os << "moment vector not normalized: m_0 = " << static_cast<double>(m_[0]);
    throw Error(os.str());
  }
}

MomentVector MomentVector::from_doubles(std::span<const double> m) {
  return MomentVector(std::vector<long double>(m.begin(), m.end()));
}

std::vector<double> MomentVector::to_doubles() const {
  return std::vector<double>(m_.begin(), m_.end());
}

const TransformMatrix& transform_matrix(int emitters) {
  if (emitters < 1) throw Error("invalid system size");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TransformMatrix>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(emitters);
  if (it == cache.end()) {
    it = cache.emplace(emitters, build_transform(emitters)).first;
  }
  return *it->second;
}

MomentVector populations_to_moments(const PopulationVector& p) {
  const std::span<const double> v = p.values();
  const long double total =
      std::accumulate(v.begin(), v.end(), 0.0L);
  if (std::abs(total - 1.0L) > 1e-8L) {
    std::ostringstream os;
    os << "unnormalized population: sum = " << static_cast<double>(total);
    throw Error(os.str());
  }
  const TransformMatrix& t = transform_matrix(p.emitters());
  const std::size_t dim = p.size();
  std::vector<long double> m(dim, 0.0L);
  for (std::size_t k = 0; k < dim; ++k) {
    long double s = 0.0L;
    for (std::size_t kp = k; kp < dim; ++kp) {
      s += t.B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp)) * v[kp];
    }
    m[k] = s;
  }
  m[0] = 1.0L;
  return MomentVector(std::move(m), t.ill_conditioned());
}

PopulationVector moments_to_populations(const MomentVector& m) {
  const TransformMatrix& t = transform_matrix(m.emitters());
  const std::size_t dim = m.size();
  std::vector<double> p(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    long double s = 0.0L;
    for (std::size_t j = k; j < dim; ++j) {
      s += t.Binv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * m[j];
    }
    if (s < -kSimplexTol) {
      std::ostringstream os;
      os << "moment vector outside Bernstein simplex (p[" << k
         << "] = " << static_cast<double>(s) << ")";
      throw Error(os.str());
    }
    p[k] = static_cast<double>(s);
  }
  return PopulationVector(std::move(p), static_cast<double>(kSimplexTol), 1e-8);
}

MomentGenerator moment_generator(int emitters) {
  MomentGenerator g;
  g.emitters = emitters;
  g.beta = rate_coefficients(emitters);
  const std::size_t dim = static_cast<std::size_t>(emitters) + 1;
  g.lambda.resize(dim);
  g.Mbar = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    g.lambda[k] = static_cast<double>(k) * static_cast<double>(dim - 1 - k);
    g.Mbar(i, i) = -g.beta[k];
    if (k + 1 < dim) g.Mbar(i, i + 1) = g.lambda[k];
  }
  return g;
}

PopulationVector coherent_populations(int emitters, double eps) {
  if (emitters < 1) throw Error("invalid system size");
  if (!(eps >= -1e-12 && eps <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "excitation probability eps = " << eps << " outside [0,1]";
    throw Error(os.str());
  }
  eps = std::clamp(eps, 0.0, 1.0);
  if (eps == 0.0) return PopulationVector::ground(emitters);
  if (eps == 1.0) return PopulationVector::fully_excited(emitters);

  const int n = emitters;
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  if (n > 50) {
    const double le = std::log(eps);
    const double lq = std::log1p(-eps);
    const double lgn = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
      const double lc = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      p[static_cast<std::size_t>(k)] = std::exp(lc + k * le + (n - k) * lq);
    }
  } else {
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
      p[static_cast<std::size_t>(k)] =
          binom * std::pow(eps, k) * std::pow(1.0 - eps, n - k);
      binom = binom * (n - k) / (k + 1);
    }
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return PopulationVector(std::move(p));
}

Eigen::MatrixXcd product_density(int emitters, double eps, double phi) {
  const PopulationVector p = coherent_populations(emitters, eps);
  const Eigen::Index dim = emitters + 1;
  Eigen::VectorXcd amp(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    amp[k] = std::polar(std::sqrt(p[static_cast<std::size_t>(k)]),
                        static_cast<double>(k) * phi);
  }
  return amp * amp.adjoint();
}

Eigen::MatrixXcd phase_averaged_product_density(int emitters, double eps,
                                                int phases) {
  if (phases <= 0) phases = emitters + 1;
  const double two_pi = boost::math::constants::two_pi<double>();
  const Eigen::Index dim = emitters + 1;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < phases; ++j) {
    acc += product_density(emitters, eps, two_pi * j / phases);
  }
  return acc / static_cast<double>(phases);
}

}  // namespace dicke
