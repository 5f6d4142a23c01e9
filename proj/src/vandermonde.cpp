#include "dicke/vandermonde.hpp"

#include "dicke/population.hpp"

namespace dicke {

std::vector<long double> solve_vandermonde(std::span<const long double> x,
                                           std::span<const long double> b) {
  if (x.size() != b.size()) throw Error("vandermonde: size mismatch");
  const std::size_t n = x.size();
  std::vector<long double> z(b.begin(), b.end());
  if (n == 0) return z;
  const std::size_t last = n - 1;

  for (std::size_t k = 0; k < last; ++k) {
    for (std::size_t i = last; i > k; --i) z[i] -= x[k] * z[i - 1];
  }
  for (std::size_t k = last; k-- > 0;) {
    for (std::size_t i = k + 1; i <= last; ++i) {
      const long double gap = x[i] - x[i - k - 1];
      if (gap == 0.0L) throw Error("vandermonde: repeated node");
      z[i] /= gap;
    }
    for (std::size_t i = k; i < last; ++i) z[i] -= z[i + 1];
  }
  return z;
}

}  // namespace dicke
