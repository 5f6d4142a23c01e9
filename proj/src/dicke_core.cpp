#include "dicke/dicke_core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "dicke/expm.hpp"

namespace dicke {
namespace {

Eigen::VectorXd to_eigen(const PopulationVector& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) v[static_cast<Eigen::Index>(k)] = p[k];
  return v;
}

PopulationVector from_eigen(const Eigen::VectorXd& v, double t) {
  std::vector<double> out(v.data(), v.data() + v.size());
  try {
    return PopulationVector(std::move(out), kEvolveClampTol, 1e-9);
  } catch (const Error& e) {
    std::ostringstream os;
    os << "evolved state at t=" << t << " is invalid: " << e.what();
    throw Error(os.str());
  }
}

}  // namespace

std::vector<double> rate_coefficients(int emitters) {
  if (emitters < 1) throw Error("invalid system size");
  std::vector<double> h(static_cast<std::size_t>(emitters) + 1);
  const std::int64_t n = emitters;
  for (std::int64_t k = 0; k <= n; ++k) {
    std::int64_t v = 0;
    if (__builtin_mul_overflow(k, n - k + 1, &v)) {
      throw Error("invalid system size");
    }
    h[static_cast<std::size_t>(k)] = static_cast<double>(v);
  }
  return h;
}

RateMatrix rate_matrix(int emitters) {
  RateMatrix m;
  m.emitters = emitters;
  m.h = rate_coefficients(emitters);
  const Eigen::Index dim = emitters + 1;
  m.entries = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 1; k < dim; ++k) {
    const double hk = m.h[static_cast<std::size_t>(k)];
    m.entries(k, k) = -hk;
    m.entries(k - 1, k) = hk;
  }
  return m;
}

PopulationVector evolve(const PopulationVector& p0, double t) {
  if (!(t >= 0.0)) throw Error("negative time");
  if (t == 0.0) return p0;
  const RateMatrix m = rate_matrix(p0.emitters());
  const Eigen::MatrixXd prop = expm(m.entries * t);
  return from_eigen(prop * to_eigen(p0), t);
}

Trajectory evolve_trajectory(const PopulationVector& p0,
                             std::span<const double> times) {
  Trajectory out;
  if (times.empty()) return out;
  if (!(times[0] >= 0.0)) throw Error("negative time");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      std::ostringstream os;
      os << "time grid must be strictly increasing (t[" << i - 1
         << "]=" << times[i - 1] << ", t[" << i << "]=" << times[i] << ")";
      throw Error(os.str());
    }
  }
  const RateMatrix m = rate_matrix(p0.emitters());
  out.times.assign(times.begin(), times.end());
  out.states.reserve(times.size());

  out.states.push_back(evolve(p0, times[0]));
  Eigen::VectorXd cur = to_eigen(out.states.back());
  // Steps of equal length reuse the previous propagator.
  double last_dt = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd prop;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(std::abs(dt - last_dt) <= 1e-15 * std::abs(dt))) {
      prop = expm(m.entries * dt);
      last_dt = dt;
    }
    cur = prop * cur;
    out.states.push_back(from_eigen(cur, times[i]));
    cur = to_eigen(out.states.back());
  }
  return out;
}

double intensity(const PopulationVector& p) {
  const std::vector<double> h = rate_coefficients(p.emitters());
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += h[k] * p[k];
  return s;
}

double intensity_from_decomposition(int emitters, const Decomposition& d) {
  if (emitters < 1) throw Error("invalid system size");
  if (d.emitters() != emitters) {
    throw Error("decomposition size does not match N");
  }
  const double n = emitters;
  double s = 0.0;
  for (const Atom& a : d.atoms()) {
    s += a.weight * (n * a.eps + n * (n - 1.0) * a.eps * (1.0 - a.eps));
  }
  return s;
}

}  // namespace dicke
