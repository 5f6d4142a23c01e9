#include "dicke/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dicke/population.hpp"

namespace dicke {

Decomposition::Decomposition(int emitters, std::vector<Atom> atoms,
                             double merge_tol, double tol)
    : emitters_(emitters) {
  if (emitters < 1) throw Error("invalid system size");
  if (atoms.empty()) throw Error("decomposition has no atoms");

  double total = 0.0;
  for (Atom& a : atoms) {
    if (!std::isfinite(a.weight) || !std::isfinite(a.eps)) {
      throw Error("decomposition atom is not finite");
    }
    if (a.weight < -tol) {
      std::ostringstream os;
      os << "negative weight " << a.weight;
      throw Error(os.str());
    }
    if (a.eps < -tol || a.eps > 1.0 + tol) {
      std::ostringstream os;
      os << "support point eps = " << a.eps << " outside [0,1]";
      throw Error(os.str());
    }
    a.weight = std::max(a.weight, 0.0);
    a.eps = std::clamp(a.eps, 0.0, 1.0);
    total += a.weight;
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "decomposition weights sum to " << total;
    throw Error(os.str());
  }

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.eps < b.eps; });
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && a.eps - atoms_.back().eps <= merge_tol) {
      Atom& last = atoms_.back();
      const double w = last.weight + a.weight;
      if (w > 0.0) last.eps = (last.eps * last.weight + a.eps * a.weight) / w;
      last.weight = w;
    } else {
      atoms_.push_back(a);
    }
  }
  for (Atom& a : atoms_) a.weight /= total;

  if (atoms_.size() > max_atoms(emitters)) {
    std::ostringstream os;
    os << "decomposition has " << atoms_.size() << " atoms, more than "
       << max_atoms(emitters) << " allowed for N=" << emitters;
    throw Error(os.str());
  }
}

Decomposition Decomposition::sorted_by_eps_descending() const {
  Decomposition out = *this;
  std::sort(out.atoms_.begin(), out.atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.eps > b.eps; });
  return out;
}

}  // namespace dicke
