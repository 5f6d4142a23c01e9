#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dicke {

/// One spin-coherent component: weight w and excitation probability eps.
struct Atom {
  double weight = 0.0;
  double eps = 0.0;
};

/// Finitely supported probability measure on [0,1], i.e. a mixture of
/// phase-averaged spin-coherent product states of N emitters.
///
/// Construction clamps support points within `tol` of [0,1] and weights in
/// [-tol, 0), merges support points closer than `merge_tol` and renormalizes.
/// The atom count is bounded by max_atoms(N).
class Decomposition {
 public:
  static constexpr double kDefaultTol = 1e-8;
  static constexpr double kDefaultMergeTol = 1e-7;

  Decomposition(int emitters, std::vector<Atom> atoms,
                double merge_tol = kDefaultMergeTol,
                double tol = kDefaultTol);

  /// ceil((N+1)/2)
  static std::size_t max_atoms(int emitters) {
    return static_cast<std::size_t>(emitters + 2) / 2;
  }

  int emitters() const { return emitters_; }
  std::size_t size() const { return atoms_.size(); }
  std::span<const Atom> atoms() const { return atoms_; }

  /// Atoms ordered by eps, largest first.
  Decomposition sorted_by_eps_descending() const;

 private:
  int emitters_ = 0;
  std::vector<Atom> atoms_;
};

}  // namespace dicke
