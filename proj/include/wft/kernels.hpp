#pragma once

#include <vector>

#include "wft/piecewise.hpp"

// Data-parallel hot loops. Each *_omp kernel computes every output entry exactly as the
// serial reference does, so results do not depend on the thread count.
namespace wft::kernels {

/// Averages of f over the cells [j/N, (j+1)/N), j = k0..k0+m-1. Column k is cell k0+k.
/// Edges are computed as j/N so grid-aligned data is reproduced exactly.
Matrix cell_averages_serial(const PiecewiseConstant& f, long k0, long N, std::size_t m);
Matrix cell_averages_omp(const PiecewiseConstant& f, long k0, long N, std::size_t m);

/// f evaluated at each x (right limits). Column k is f(xs[k]).
Matrix sample_serial(const PiecewiseConstant& f, const std::vector<double>& xs);
Matrix sample_omp(const PiecewiseConstant& f, const std::vector<double>& xs);

}  // namespace wft::kernels
