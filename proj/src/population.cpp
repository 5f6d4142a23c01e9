#include "dicke/population.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace dicke {

PopulationVector::PopulationVector(std::vector<double> p, double tol_neg,
                                   double tol_norm)
    : p_(std::move(p)) {
  if (p_.size() < 2) {
    throw Error("population vector needs N+1 >= 2 entries");
  }
  emitters_ = static_cast<int>(p_.size()) - 1;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (!std::isfinite(p_[k])) {
      throw Error("population vector has a non-finite entry at k=" +
                  std::to_string(k));
    }
    if (p_[k] < -tol_neg) {
      std::ostringstream os;
      os << "negative population p[" << k << "] = " << p_[k]
         << " (tolerance " << tol_neg << ")";
      throw Error(os.str());
    }
    if (p_[k] < 0.0) p_[k] = 0.0;
  }
  const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(total - 1.0) > tol_norm) {
    std::ostringstream os;
    os << "unnormalized population: sum = " << total;
    throw Error(os.str());
  }
  for (double& v : p_) v /= total;
}

PopulationVector PopulationVector::ground(int emitters) {
  return dicke(emitters, 0);
}

PopulationVector PopulationVector::fully_excited(int emitters) {
  return dicke(emitters, emitters);
}

PopulationVector PopulationVector::dicke(int emitters, int k) {
  if (emitters < 1) throw Error("invalid system size");
  if (k < 0 || k > emitters) {
    throw Error("Dicke level k=" + std::to_string(k) + " outside [0, " +
                std::to_string(emitters) + "]");
  }
  std::vector<double> p(static_cast<std::size_t>(emitters) + 1, 0.0);
  p[static_cast<std::size_t>(k)] = 1.0;
  return PopulationVector(std::move(p));
}

}  // namespace dicke
