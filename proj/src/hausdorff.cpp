#include "dicke/hausdorff.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace dicke {
namespace {

MatrixL hankel(const MomentVector& m, int dim, int offset, long double sign2,
               int offset2) {
  MatrixL a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      long double v = m[static_cast<std::size_t>(i + j + offset)];
      if (sign2 != 0.0L) v += sign2 * m[static_cast<std::size_t>(i + j + offset2)];
      a(i, j) = v;
    }
  }
  return a;
}

VectorL eigenvalues(const MatrixL& a) {
  Eigen::SelfAdjointEigenSolver<MatrixL> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigenvalue solver failed");
  return es.eigenvalues();
}

struct Spectrum {
  HankelTag tag;
  const MatrixL* matrix;
  VectorL eig;
};

std::vector<Spectrum> spectra(const HankelPair& pair) {
  std::vector<Spectrum> out;
  out.push_back({HankelTag::H, &pair.H, eigenvalues(pair.H)});
  out.push_back({HankelTag::Hbar, &pair.Hbar, eigenvalues(pair.Hbar)});
  if (pair.Hx) out.push_back({HankelTag::Hx, &*pair.Hx, eigenvalues(*pair.Hx)});
  return out;
}

long double spectral_scale(const std::vector<Spectrum>& s) {
  long double norm = 0.0L;
  for (const Spectrum& sp : s) {
    if (sp.eig.size() > 0) norm = std::max(norm, sp.eig.cwiseAbs().maxCoeff());
  }
  return 1.0L + norm;
}

// Leading minors through their ratios det_r / det_{r-1}, i.e. the pivots of
// elimination without row exchanges. These scale like eigenvalues, unlike the
// determinants themselves. A vanishing pivot ends the test.
bool leading_minors_ok(const MatrixL& a, long double tol) {
  MatrixL w = a;
  const Eigen::Index n = w.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    const long double pivot = w(r, r);
    if (pivot < -tol) return false;
    if (pivot <= tol) return true;
    for (Eigen::Index i = r + 1; i < n; ++i) {
      const long double f = w(i, r) / pivot;
      w.row(i).tail(n - r) -= f * w.row(r).tail(n - r);
    }
  }
  return true;
}

}  // namespace

std::string to_string(HankelTag tag) {
  switch (tag) {
    case HankelTag::H: return "H";
    case HankelTag::Hbar: return "Hbar";
    case HankelTag::Hx: return "Hx";
  }
  return "?";
}

HankelPair build_hankel_pair(const MomentVector& m) {
  const int n = m.emitters();
  if (n < 1) throw Error("need at least two moments");
  HankelPair pair;
  pair.H = hankel(m, n / 2 + 1, 0, 0.0L, 0);
  if (n % 2 == 0) {
    pair.Hbar = hankel(m, n / 2, 1, -1.0L, 2);
  } else {
    pair.Hbar = hankel(m, (n + 1) / 2, 0, -1.0L, 1);
    pair.Hx = hankel(m, (n + 1) / 2, 1, 0.0L, 0);
  }
  return pair;
}

SeparabilityVerdict validate_moments(const MomentVector& m, double tol_psd) {
  const HankelPair pair = build_hankel_pair(m);
  if (!pair.H.allFinite() || !pair.Hbar.allFinite()) {
    throw Error("moment vector has non-finite entries");
  }
  const std::vector<Spectrum> s = spectra(pair);
  const long double scale = spectral_scale(s);
  const long double threshold = static_cast<long double>(tol_psd) * scale;

  SeparabilityVerdict v;
  v.scale = static_cast<double>(scale);
  v.valid = true;
  v.minor_test_valid = true;
  long double overall_min = INFINITY;
  for (const Spectrum& sp : s) {
    const long double lo = sp.eig.minCoeff();
    overall_min = std::min(overall_min, lo);
    switch (sp.tag) {
      case HankelTag::H: v.min_eig_H = static_cast<double>(lo); break;
      case HankelTag::Hbar: v.min_eig_Hbar = static_cast<double>(lo); break;
      case HankelTag::Hx: v.min_eig_Hx = static_cast<double>(lo); break;
    }
    if (lo < -threshold) {
      v.valid = false;
      if (!v.violating_minor) {
        for (Eigen::Index r = 1; r <= sp.matrix->rows(); ++r) {
          if (eigenvalues(sp.matrix->topLeftCorner(r, r)).minCoeff() < -threshold) {
            v.violating_minor = ViolatingMinor{sp.tag, static_cast<int>(r)};
            break;
          }
        }
      }
    }
    if (!leading_minors_ok(*sp.matrix, threshold)) v.minor_test_valid = false;
  }
  v.boundary = v.valid && overall_min <= threshold;
  return v;
}

double hankel_negativity(const MomentVector& m, double tol_psd) {
  const std::vector<Spectrum> s = spectra(build_hankel_pair(m));
  const long double threshold = static_cast<long double>(tol_psd) * spectral_scale(s);
  long double sum = 0.0L;
  for (const Spectrum& sp : s) {
    for (Eigen::Index i = 0; i < sp.eig.size(); ++i) {
      if (sp.eig[i] < -threshold) sum -= sp.eig[i];
    }
  }
  return static_cast<double>(sum);
}

double hankel_negativity(const PopulationVector& p, double tol_psd) {
  return hankel_negativity(populations_to_moments(p), tol_psd);
}

}  // namespace dicke
