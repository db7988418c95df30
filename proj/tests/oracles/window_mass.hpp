#pragma once
// Mass on [3,4] at t = 1 for u_t + u_x = (int_0^1 u) chi_[3,4], u(t,0) = 0, u(0) = chi_[0,1],
// by characteristics: the window [0,1] only ever sees the transported indicator, so the
// deposit rate is m(s) = |[s, 1+s] cap [0,1]|; mass deposited at s is carried to
// [3 + (1-s), 4 + (1-s)] by t = 1. Midpoint rule in s.

#include <algorithm>

namespace oracle {

inline double overlap(double a, double b, double c, double d) { return std::max(0.0, std::min(b, d) - std::max(a, c)); }

inline double window_mass_continuous(int nodes = 200000) {
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double s = (k + 0.5) / nodes;
    const double rate = overlap(s, 1 + s, 0, 1);
    acc += rate * overlap(3 + (1 - s), 4 + (1 - s), 3, 4) / nodes;
  }
  return acc;
}

/// Same with the source lumped at the splitting times h e, h = 1..1/e (step e divides 1).
inline double window_mass_split(double e) {
  const int k = static_cast<int>(1.0 / e + 0.5);
  double acc = 0.0;
  for (int h = 1; h <= k; ++h) {
    const double s = h * e;
    acc += e * overlap(s, 1 + s, 0, 1) * overlap(3 + (1 - s), 4 + (1 - s), 3, 4);
  }
  return acc;
}

}  // namespace oracle
