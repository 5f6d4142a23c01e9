#include "dicke/reconstruct.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "dicke/dicke_core.hpp"
#include "dicke/parallel.hpp"
#include "dicke/vandermonde.hpp"

namespace dicke {
namespace {

enum class Failure { None, Roots, NegativeWeight, Residual };

struct Candidate {
  Failure failure = Failure::None;
  std::vector<Atom> atoms;
  double residual = INFINITY;
};

// Roots of the degree-r orthogonal polynomial of the measure with moments
// mm[0..2r-1].
std::optional<std::vector<long double>> prony_roots(
    std::span<const long double> mm, int r, double root_tol) {
  MatrixL h(r, r);
  VectorL rhs(r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) h(i, j) = mm[static_cast<std::size_t>(i + j)];
    rhs[i] = -mm[static_cast<std::size_t>(i + r)];
  }
  const VectorL a = h.fullPivLu().solve(rhs);
  if (!a.allFinite()) return std::nullopt;

  MatrixL companion = MatrixL::Zero(r, r);
  for (int i = 1; i < r; ++i) companion(i, i - 1) = 1.0L;
  companion.col(r - 1) = -a;
  Eigen::EigenSolver<MatrixL> es(companion, false);
  if (es.info() != Eigen::Success) return std::nullopt;

  std::vector<long double> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<long double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > root_tol) return std::nullopt;
    if (z.real() < -root_tol || z.real() > 1.0L + root_tol) return std::nullopt;
    roots.push_back(std::clamp(z.real(), 0.0L, 1.0L));
  }
  return roots;
}

std::vector<long double> merge_nodes(std::vector<long double> x, double tol) {
  std::sort(x.begin(), x.end());
  std::vector<long double> out;
  std::vector<int> count;
  for (long double v : x) {
    if (!out.empty() && v - out.back() / count.back() <= tol) {
      out.back() += v;
      ++count.back();
    } else {
      out.push_back(v);
      count.push_back(1);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= count[i];
  return out;
}

long double population_residual(int n, std::span<const long double> x,
                                std::span<const long double> w,
                                const VectorL& p_target) {
  long double worst = 0.0L;
  for (int k = 0; k <= n; ++k) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      long double binom = 1.0L;
      for (int j = 1; j <= k; ++j) binom = binom * (n - k + j) / j;
      s += w[i] * binom * std::pow(x[i], k) * std::pow(1.0L - x[i], n - k);
    }
    worst = std::max(worst, std::abs(s - p_target[k]));
  }
  return worst;
}

long double moment_residual_raw(std::span<const long double> m,
                                std::span<const long double> x,
                                std::span<const long double> w) {
  long double worst = 0.0L;
  for (std::size_t k = 0; k < m.size(); ++k) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += w[i] * std::pow(x[i], static_cast<int>(k));
    }
    worst = std::max(worst, std::abs(s - m[k]));
  }
  return worst;
}

Candidate attempt(const MomentVector& m, int r, const VectorL& p_target,
                  const ReconstructOptions& opt) {
  const int n = m.emitters();
  const std::span<const long double> mv = m.values();
  Candidate c;

  std::optional<std::vector<long double>> roots;
  if (2 * r - 1 > n) {
    // Lower principal representation: node at 0 plus r-1 nodes carried by
    // the measure x dmu, whose moments are m_{k+1}.
    std::vector<long double> nodes{0.0L};
    if (r > 1) {
      roots = prony_roots(mv.subspan(1), r - 1, opt.root_tol);
      if (!roots) {
        c.failure = Failure::Roots;
        return c;
      }
      nodes.insert(nodes.end(), roots->begin(), roots->end());
    }
    roots = nodes;
  } else {
    roots = prony_roots(mv, r, opt.root_tol);
  }
  if (!roots) {
    c.failure = Failure::Roots;
    return c;
  }

  const std::vector<long double> x = merge_nodes(*roots, opt.merge_tol);
  std::vector<long double> w = solve_vandermonde(x, mv.subspan(0, x.size()));
  long double total = 0.0L;
  for (long double& wi : w) {
    if (!std::isfinite(wi) || wi < -opt.weight_tol) {
      c.failure = Failure::NegativeWeight;
      return c;
    }
    wi = std::max(wi, 0.0L);
    total += wi;
  }
  for (long double& wi : w) wi /= total;

  const long double res_m = moment_residual_raw(mv, x, w);
  const long double res_p = population_residual(n, x, w, p_target);
  c.residual = static_cast<double>(std::max(res_m, res_p));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] > 0.0L) {
      c.atoms.push_back({static_cast<double>(w[i]), static_cast<double>(x[i])});
    }
  }
  c.failure = c.residual <= opt.residual_tol ? Failure::None : Failure::Residual;
  return c;
}

int detect_rank(const MatrixL& h, double rank_tol) {
  const Eigen::Index dim = h.rows();
  Eigen::JacobiSVD<MatrixL> full(h);
  const long double smax = full.singularValues()[0];
  for (Eigen::Index r = 1; r < dim; ++r) {
    Eigen::JacobiSVD<MatrixL> svd(h.topLeftCorner(r + 1, r + 1));
    if (svd.singularValues()[r] <= static_cast<long double>(rank_tol) * smax) {
      return static_cast<int>(r);
    }
  }
  return static_cast<int>(dim);
}

}  // namespace

Decomposition reconstruct_decomposition(const MomentVector& m,
                                        const ReconstructOptions& opt) {
  const int n = m.emitters();
  const SeparabilityVerdict verdict = validate_moments(m, opt.tol_psd);
  if (!verdict.valid) {
    throw InfeasibleError("infeasible: moments not representable on [0,1]");
  }
  const HankelPair pair = build_hankel_pair(m);
  const int r0 = detect_rank(pair.H, opt.rank_tol);
  const int rmax = static_cast<int>(Decomposition::max_atoms(n));

  const TransformMatrix& t = transform_matrix(n);
  VectorL mv(n + 1);
  for (int k = 0; k <= n; ++k) mv[k] = m[static_cast<std::size_t>(k)];
  const VectorL p_target = t.Binv * mv;

  bool saw_residual = false;
  bool saw_weight = false;
  for (int r = std::max(1, r0); r <= rmax; ++r) {
    Candidate c = attempt(m, r, p_target, opt);
    if (c.failure == Failure::None) {
      return Decomposition(n, std::move(c.atoms), opt.merge_tol, opt.weight_tol);
    }
    saw_residual |= c.failure == Failure::Residual;
    saw_weight |= c.failure == Failure::NegativeWeight;
  }
  if (saw_residual) throw InfeasibleError("rank detection failed");
  if (saw_weight) throw InfeasibleError("negative weight");
  throw InfeasibleError("infeasible: moments not representable on [0,1]");
}

double moment_residual(const MomentVector& m, const Decomposition& d) {
  if (d.emitters() != m.emitters()) throw Error("size mismatch");
  std::vector<long double> x, w;
  for (const Atom& a : d.atoms()) {
    x.push_back(a.eps);
    w.push_back(a.weight);
  }
  return static_cast<double>(moment_residual_raw(m.values(), x, w));
}

PopulationVector decomposition_populations(const Decomposition& d) {
  const int n = d.emitters();
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  for (const Atom& a : d.atoms()) {
    const PopulationVector b = coherent_populations(n, a.eps);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += a.weight * b[k];
  }
  return PopulationVector(std::move(p), 1e-12, 1e-8);
}

double decomposition_residual(const PopulationVector& p, const Decomposition& d) {
  if (d.emitters() != p.emitters()) throw Error("size mismatch");
  const PopulationVector q = decomposition_populations(d);
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    worst = std::max(worst, std::abs(p[k] - q[k]));
  }
  return worst;
}

std::vector<Decomposition> trajectory_decomposition(
    int emitters, std::span<const double> times,
    const ReconstructOptions& opt) {
  const Trajectory traj =
      evolve_trajectory(PopulationVector::fully_excited(emitters), times);
  std::vector<std::optional<Decomposition>> slots(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    try {
      slots[i] = reconstruct_decomposition(
                     populations_to_moments(traj.states[i]), opt)
                     .sorted_by_eps_descending();
    } catch (const InfeasibleError& e) {
      std::ostringstream os;
      os << e.what() << " (at t=" << times[i] << ")";
      throw InfeasibleError(os.str());
    } catch (const Error& e) {
      std::ostringstream os;
      os << e.what() << " (at t=" << times[i] << ")";
      throw Error(os.str());
    }
  });
  std::vector<Decomposition> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace dicke
