#pragma once

#include <Eigen/Dense>

namespace wft {

using State = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Signed strength per family; component i-1 belongs to family i.
using Strengths = Eigen::VectorXd;

inline double norm1(const State& u) { return u.lpNorm<1>(); }
inline double dist(const State& a, const State& b) { return (a - b).norm(); }

}  // namespace wft
