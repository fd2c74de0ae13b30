#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

/// Cross ratio of four concurrent lines from their direction angles:
/// sin(θ2−θ1) sin(θ4−θ3) / (sin(θ3−θ1) sin(θ4−θ2)).
inline double cross_ratio_angles(const std::array<double, 4>& theta) {
  return std::sin(theta[1] - theta[0]) * std::sin(theta[3] - theta[2]) /
         (std::sin(theta[2] - theta[0]) * std::sin(theta[3] - theta[1]));
}

/// The value for every one of the 24 orderings, perm[k] listing the source
/// positions in order.
inline std::vector<std::pair<std::array<int, 4>, double>> permutation_values(const std::array<double, 4>& theta) {
  std::vector<std::pair<std::array<int, 4>, double>> out;
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    out.push_back({perm, cross_ratio_angles({theta[perm[0]], theta[perm[1]], theta[perm[2]], theta[perm[3]]})});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace oracle
