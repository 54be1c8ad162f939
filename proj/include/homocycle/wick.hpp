#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "homocycle/thermo.hpp"

namespace homocycle {

namespace detail {

// The 15 perfect matchings of six slots, each as three (a,b) pairs.
inline const std::vector<std::array<int, 6>>& six_matchings() {
  static const std::vector<std::array<int, 6>> ms = [] {
    std::vector<std::array<int, 6>> out;
    std::array<int, 6> cur{};
    auto rec = [&](auto&& self, unsigned used, int filled) -> void {
      if (filled == 6) {
        out.push_back(cur);
        return;
      }
      int first = 0;
      while (used & (1u << first)) ++first;
      for (int second = first + 1; second < 6; ++second) {
        if (used & (1u << second)) continue;
        cur[filled] = first;
        cur[filled + 1] = second;
        self(self, used | (1u << first) | (1u << second), filled + 2);
      }
    };
    rec(rec, 0u, 0);
    return out;
  }();
  return ms;
}

}  // namespace detail

// E[q4(v)] for v ~ N(0, C) and q4(v) = sum T(i,j,k,l) v_i v_j v_k v_l:
// each ordered index tuple contributes over the three pairings.
inline double gaussian_quartic_moment(const Eigen::MatrixXd& C,
                                      const Tensor4& T) {
  const int b = T.b;
  double acc = 0;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j)
      for (int k = 0; k < b; ++k)
        for (int l = 0; l < b; ++l) {
          double t = T.at(i, j, k, l);
          if (t != 0.0)
            acc += t * (C(i, j) * C(k, l) + C(i, k) * C(j, l) +
                        C(i, l) * C(j, k));
        }
  return acc;
}

// E[qA(v) qB(v)] for cubics qA, qB: the full Isserlis sum over the 15
// matchings of the six slots (first three from A, last three from B).
inline double gaussian_sextic_moment(const Eigen::MatrixXd& C, const Tensor3& A,
                                     const Tensor3& B) {
  const int b = A.b;
  const auto& ms = detail::six_matchings();
  double acc = 0;
  int idx[6];
  for (idx[0] = 0; idx[0] < b; ++idx[0])
    for (idx[1] = 0; idx[1] < b; ++idx[1])
      for (idx[2] = 0; idx[2] < b; ++idx[2]) {
        double a = A.at(idx[0], idx[1], idx[2]);
        if (a == 0.0) continue;
        for (idx[3] = 0; idx[3] < b; ++idx[3])
          for (idx[4] = 0; idx[4] < b; ++idx[4])
            for (idx[5] = 0; idx[5] < b; ++idx[5]) {
              double bb = B.at(idx[3], idx[4], idx[5]);
              if (bb == 0.0) continue;
              double msum = 0;
              for (const auto& m : ms) {
                msum += C(idx[m[0]], idx[m[1]]) * C(idx[m[2]], idx[m[3]]) *
                        C(idx[m[4]], idx[m[5]]);
              }
              acc += a * bb * msum;
            }
      }
  return acc;
}

}  // namespace homocycle
