#pragma once

#include <span>
#include <vector>

namespace dicke {

// Solves sum_j x_j^i z_j = b_i, i = 0..n-1, for distinct nodes x in O(n^2)
// (Bjorck-Pereyra). Throws dicke::Error on repeated nodes.
std::vector<long double> solve_vandermonde(std::span<const long double> x,
                                           std::span<const long double> b);

}  // namespace dicke
