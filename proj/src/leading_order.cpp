#include "dicke/leading_order.hpp"

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <mutex>
#include <sstream>

#include "dicke/population.hpp"

namespace dicke {
namespace {

namespace mp = boost::multiprecision;
using Real = mp::mpfr_float;

// mpfr_float's default precision is process-wide.
std::mutex& precision_mutex() {
  static std::mutex mu;
  return mu;
}

class ScopedPrecision {
 public:
  explicit ScopedPrecision(int digits)
      : lock_(precision_mutex()), saved_(Real::default_precision()) {
    Real::default_precision(static_cast<unsigned>(digits));
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  std::lock_guard<std::mutex> lock_;
  unsigned saved_;
};

// exp(Mbar delta) v(x) by Taylor series. Mbar is upper bidiagonal, so each
// term costs O(N). The tail after term i is bounded by
// |term_i| q / (1 - q), q = |Mbar delta|_inf / (i + 1).
std::vector<Real> evolved_moments(int n, const Real& x, const Real& delta,
                                  int digits) {
  const std::size_t dim = static_cast<std::size_t>(n) + 1;
  std::vector<Real> beta(dim), lambda(dim);
  Real norm = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    beta[k] = Real(static_cast<long>(k * (dim - k)));
    lambda[k] = Real(static_cast<long>(k * (dim - 1 - k)));
    norm = std::max(norm, Real((beta[k] + lambda[k]) * delta));
  }
  std::vector<Real> term(dim), sum(dim);
  term[0] = 1;
  for (std::size_t k = 1; k < dim; ++k) term[k] = term[k - 1] * x;
  sum = term;
  const Real eps = mp::pow(Real(10), -(digits + 5));
  for (long i = 1;; ++i) {
    std::vector<Real> next(dim);
    Real tmax = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      Real v = -beta[k] * term[k];
      if (k + 1 < dim) v += lambda[k] * term[k + 1];
      next[k] = v * delta / i;
      sum[k] += next[k];
      tmax = std::max(tmax, Real(mp::abs(next[k])));
    }
    term.swap(next);
    const Real q = norm / (i + 1);
    if (q < 1 && tmax * q / (1 - q) <= eps) break;
    if (i > 100000) throw Error("moment series did not converge");
  }
  return sum;
}

Real determinant(std::vector<std::vector<Real>> a) {
  const std::size_t n = a.size();
  Real det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (mp::abs(a[i][c]) > mp::abs(a[piv][c])) piv = i;
    }
    if (a[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const Real f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

Real minor_value(int n, int r, MinorKind kind, const Real& x,
                 const Real& delta, int digits) {
  const std::vector<Real> m = evolved_moments(n, x, delta, digits);
  const std::size_t sr = static_cast<std::size_t>(r);
  std::vector<std::vector<Real>> a(sr, std::vector<Real>(sr));
  for (std::size_t i = 0; i < sr; ++i) {
    for (std::size_t j = 0; j < sr; ++j) {
      a[i][j] = kind == MinorKind::Plain ? m[i + j] : Real(m[i + j + 1] - m[i + j + 2]);
    }
  }
  return determinant(std::move(a));
}

// Polynomial extrapolation to h = 0 (Neville); returns the last two diagonal
// entries.
std::pair<Real, Real> extrapolate(const std::vector<Real>& h,
                                  const std::vector<Real>& v) {
  const std::size_t L = v.size();
  std::vector<std::vector<Real>> t(L);
  for (std::size_t j = 0; j < L; ++j) {
    t[j].push_back(v[j]);
    for (std::size_t k = 1; k <= j; ++k) {
      const Real ratio = h[j - k] / h[j];
      t[j].push_back(t[j][k - 1] + (t[j][k - 1] - t[j - 1][k - 1]) / (ratio - 1));
    }
  }
  const Real last = t[L - 1][L - 1];
  const Real prev = L >= 2 ? t[L - 1][L - 2] : last;
  return {last, prev};
}

}  // namespace

mp::cpp_int kr_closed_form(int r) {
  if (r < 1) throw Error("minor order r must be >= 1");
  mp::cpp_int k = 1;
  k <<= static_cast<unsigned>(r * (r - 1) / 2);
  mp::cpp_int fact = 1;
  for (int j = 1; j < r; ++j) {
    fact *= j;
    k *= fact;
  }
  return k;
}

LinearizedMinors linearized_minor_check(int emitters, double x, double delta,
                                        double tolerance) {
  if (emitters < 1) throw Error("invalid system size");
  if (!(x >= 0.0 && x <= 1.0)) throw Error("x must lie in [0,1]");
  if (!(delta > 0.0)) throw Error("delta must be positive");
  const long double n = emitters;
  const long double xl = x, d = delta;
  auto mdot = [&](int k) {
    return std::pow(xl, k) * k * (-n - 1 + k + (n - k) * xl);
  };
  LinearizedMinors out;
  if (emitters >= 2) {
    out.det_H2 = static_cast<double>(d * (mdot(0) * xl * xl + mdot(2) - 2 * xl * mdot(1)));
    out.det_Hbar1 = static_cast<double>(xl - xl * xl + d * (mdot(1) - mdot(2)));
  }
  if (emitters >= 4) {
    out.det_Hbar2 = static_cast<double>(
        d * xl * (1 - xl) *
        (mdot(3) - mdot(4) + xl * xl * (mdot(1) - mdot(2)) - 2 * xl * (mdot(2) - mdot(3))));
  }
  for (const std::optional<double>& v : {std::optional<double>(out.det_H1), out.det_H2,
                                         out.det_Hbar1, out.det_Hbar2}) {
    if (v && *v < -tolerance) out.holds = false;
  }
  return out;
}

std::string to_string(MinorKind kind) {
  return kind == MinorKind::Plain ? "plain" : "shifted";
}

MinorKind parse_minor_kind(const std::string& s) {
  if (s == "plain") return MinorKind::Plain;
  if (s == "shifted") return MinorKind::Shifted;
  throw Error("unknown minor kind '" + s + "' (expected plain or shifted)");
}

void PrecisionContext::validate() const {
  if (digits < 30) throw Error("precision must be at least 30 digits");
  if (delta_ladder.empty()) {
    if (rungs < 2) throw Error("delta ladder needs at least two rungs");
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error("ladder ratio must lie in (0,1)");
    return;
  }
  if (delta_ladder.size() < 2) throw Error("delta ladder needs at least two rungs");
  for (std::size_t i = 0; i < delta_ladder.size(); ++i) {
    const double d = delta_ladder[i];
    if (!(d > 0.0 && d < 1.0)) throw Error("delta ladder values must lie in (0,1)");
    if (i > 0 && !(d < delta_ladder[i - 1])) {
      throw Error("delta ladder must be strictly decreasing");
    }
  }
}

LeadingOrderReport leading_coefficient_extract(int emitters, int r,
                                               MinorKind kind, double x,
                                               const PrecisionContext& ctx) {
  ctx.validate();
  if (emitters < 1) throw Error("invalid system size");
  if (!(x > 0.0 && x < 1.0)) throw Error("x must lie in (0,1)");
  const int rmax = kind == MinorKind::Plain ? emitters / 2 + 1 : emitters / 2;
  if (r < 1 || r > rmax) {
    std::ostringstream os;
    os << "minor order r=" << r << " out of range for N=" << emitters << " ("
       << to_string(kind) << " allows 1.." << rmax << ")";
    throw Error(os.str());
  }

  std::vector<double> ladder = ctx.delta_ladder;
  if (ladder.empty()) {
    double beta_max = 0.0;
    for (int k = 0; k <= emitters; ++k) {
      beta_max = std::max(beta_max, static_cast<double>(k) * (emitters - k + 1));
    }
    double d = 0.5 * std::min(1.0, 2.0 * (1.0 - x)) / beta_max;
    for (int i = 0; i < ctx.rungs; ++i, d *= ctx.ratio) ladder.push_back(d);
  }

  LeadingOrderReport rep;
  rep.emitters = emitters;
  rep.r = r;
  rep.kind = kind;
  rep.x = x;
  const int p = r * (r - 1) / 2;
  rep.expected_exponent = p;
  rep.expected_K = kr_closed_form(r).convert_to<double>();

  ScopedPrecision guard(ctx.digits);
  const Real xr(x);
  const int ax = kind == MinorKind::Plain ? r * (r - 1) : r * r;
  const int a1x = kind == MinorKind::Plain ? r * (r - 1) / 2 : r * (r + 1) / 2;
  const Real prefactor = mp::pow(xr, ax) * mp::pow(Real(1 - xr), a1x);

  std::vector<Real> h, scaled, dets;
  for (double dd : ladder) {
    const Real d(dd);
    const Real det = minor_value(emitters, r, kind, xr, d, ctx.digits);
    h.push_back(d);
    dets.push_back(det);
    scaled.push_back(det / (prefactor * mp::pow(d, p)));
  }
  const auto [est, prev] = extrapolate(h, scaled);
  if (est == 0) throw Error("increase digits: leading coefficient vanished");
  const Real residual = mp::abs(Real((est - prev) / est));

  std::vector<Real> hh, slopes;
  for (std::size_t j = 0; j + 1 < dets.size(); ++j) {
    if (dets[j] <= 0 || dets[j + 1] <= 0) {
      slopes.clear();
      break;
    }
    hh.push_back(h[j]);
    slopes.push_back(mp::log(Real(dets[j] / dets[j + 1])) / mp::log(Real(h[j] / h[j + 1])));
  }
  rep.estimated_K = est.convert_to<double>();
  rep.relative_error = std::abs(rep.estimated_K - rep.expected_K) / rep.expected_K;
  rep.fit_residual = residual.convert_to<double>();
  rep.fitted_exponent =
      slopes.empty() ? NAN : extrapolate(hh, slopes).first.convert_to<double>();

  if (!(rep.fit_residual <= 1e-6)) {
    std::ostringstream os;
    os << "increase digits: relative fit residual " << rep.fit_residual
       << " exceeds 1e-6 at " << ctx.digits << " digits";
    throw Error(os.str());
  }
  return rep;
}

}  // namespace dicke
