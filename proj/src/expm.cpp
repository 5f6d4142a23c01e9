#include "dicke/expm.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "dicke/population.hpp"

namespace dicke {
namespace {

// theta_m: largest 1-norm for which the degree-m approximant is accurate to
// unit roundoff in double precision.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2,
                                          2.539398330063230e-1,
                                          9.504178996162932e-1,
                                          2.097847961257068e0,
                                          5.371920351148152e0};
constexpr std::array<int, 5> kDegree = {3, 5, 7, 9, 13};

double pade_coeff(int m, int j) {
  // c_j = (2m-j)! m! / ((2m)! j! (m-j)!)
  double c = 1.0;
  for (int i = 1; i <= j; ++i) {
    c *= static_cast<double>(m - i + 1) /
         (static_cast<double>(i) * static_cast<double>(2 * m - i + 1));
  }
  return c;
}

void pade_low(const Eigen::MatrixXd& a, int m, Eigen::MatrixXd& u,
              Eigen::MatrixXd& v) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = id;
  Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(n, n);
  v = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j <= m; j += 2) {
    v += pade_coeff(m, j) * power;
    odd += pade_coeff(m, j + 1) * power;
    power = power * a2;
  }
  u = a * odd;
}

void pade13(const Eigen::MatrixXd& a, Eigen::MatrixXd& u,
            Eigen::MatrixXd& v) {
  std::array<double, 14> b{};
  for (int j = 0; j <= 13; ++j) b[j] = pade_coeff(13, j);
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd uu = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u = a * (uu + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXd vv = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v = vv + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error("expm: matrix must be square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) throw Error("expm: input has non-finite entries");

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  Eigen::MatrixXd u, v;
  int squarings = 0;
  bool done = false;
  for (std::size_t i = 0; i + 1 < kTheta.size(); ++i) {
    if (norm <= kTheta[i]) {
      pade_low(a, kDegree[i], u, v);
      done = true;
      break;
    }
  }
  if (!done) {
    if (norm > kTheta.back()) {
      squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta.back())));
    }
    pade13(std::ldexp(1.0, -squarings) * a, u, v);
  }

  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;

  if (!r.allFinite()) {
    std::ostringstream os;
    os << "expm failed: non-finite result (n=" << n << ", 1-norm=" << norm
       << ", squarings=" << squarings << ")";
    throw Error(os.str());
  }
  return r;
}

}  // namespace dicke
