#pragma once

#include <optional>
#include <string>

#include "dicke/bernstein.hpp"
#include "dicke/population.hpp"

namespace dicke {

inline constexpr double kDefaultTolPsd = 1e-10;

/// Hankel matrix H[i][j] = m_{i+j} together with its localizing companions.
///
/// Even N: Hbar[i][j] = m_{i+j+1} - m_{i+j+2} (the x(1-x) localizer), no Hx.
/// Odd N:  Hbar[i][j] = m_{i+j} - m_{i+j+1} (the 1-x localizer) and
///         Hx[i][j]   = m_{i+j+1} (the x localizer).
/// Together these are the truncated Hausdorff conditions on [0,1].
struct HankelPair {
  MatrixL H;
  MatrixL Hbar;
  std::optional<MatrixL> Hx;
};

HankelPair build_hankel_pair(const MomentVector& m);

enum class HankelTag { H, Hbar, Hx };
std::string to_string(HankelTag tag);

struct ViolatingMinor {
  HankelTag matrix = HankelTag::H;
  int order = 0;  // smallest leading block that is not PSD
};

struct SeparabilityVerdict {
  bool valid = false;
  bool boundary = false;  // smallest eigenvalue within tol_psd * scale of 0
  double min_eig_H = 0.0;
  double min_eig_Hbar = 0.0;
  std::optional<double> min_eig_Hx;
  std::optional<ViolatingMinor> violating_minor;
  bool minor_test_valid = false;  // leading principal minor signs
  double scale = 1.0;             // 1 + largest spectral norm
};

SeparabilityVerdict validate_moments(const MomentVector& m,
                                     double tol_psd = kDefaultTolPsd);

/// Sum of |lambda| over eigenvalues below -tol_psd * scale of every matrix in
/// the Hankel pair of B p.
double hankel_negativity(const MomentVector& m, double tol_psd = kDefaultTolPsd);
double hankel_negativity(const PopulationVector& p,
                         double tol_psd = kDefaultTolPsd);

}  // namespace dicke
