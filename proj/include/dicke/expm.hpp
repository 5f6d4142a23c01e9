#pragma once

#include <Eigen/Dense>

namespace dicke {

// Dense matrix exponential by scaling and squaring with a diagonal Pade
// approximant of degree 3, 5, 7, 9 or 13 (Higham 2005). No eigendecomposition.
// Throws dicke::Error if the result is not finite.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

}  // namespace dicke
