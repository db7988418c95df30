#include "wft/kernels.hpp"

#include <algorithm>

namespace wft::kernels {

namespace {

// Integral of f over [a, b) divided by (b - a), starting from the piece containing a.
void cell_average(const PiecewiseConstant& f, double a, double b, Eigen::Ref<Eigen::VectorXd> out) {
  out.setZero();
  std::size_t p = f.piece(a);
  double x = a;
  while (x < b) {
    const double end = p < f.breaks.size() ? std::min(b, f.breaks[p]) : b;
    out += (end - x) * f.values[p];
    x = end;
    ++p;
  }
  out /= (b - a);
}

}  // namespace

Matrix cell_averages_serial(const PiecewiseConstant& f, long k0, long N, std::size_t m) {
  Matrix out(f.dim(), static_cast<Eigen::Index>(m));
  const double n = static_cast<double>(N);
  for (std::size_t k = 0; k < m; ++k) {
    const long j = k0 + static_cast<long>(k);
    cell_average(f, static_cast<double>(j) / n, static_cast<double>(j + 1) / n, out.col(static_cast<Eigen::Index>(k)));
  }
  return out;
}

Matrix cell_averages_omp(const PiecewiseConstant& f, long k0, long N, std::size_t m) {
  Matrix out(f.dim(), static_cast<Eigen::Index>(m));
  const double n = static_cast<double>(N);
  const auto M = static_cast<long>(m);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < M; ++k) {
    const long j = k0 + k;
    cell_average(f, static_cast<double>(j) / n, static_cast<double>(j + 1) / n, out.col(k));
  }
  return out;
}

Matrix sample_serial(const PiecewiseConstant& f, const std::vector<double>& xs) {
  Matrix out(f.dim(), static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = f.at(xs[k]);
  return out;
}

Matrix sample_omp(const PiecewiseConstant& f, const std::vector<double>& xs) {
  Matrix out(f.dim(), static_cast<Eigen::Index>(xs.size()));
  const auto M = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < M; ++k) out.col(k) = f.at(xs[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace wft::kernels
