#pragma once

#include <limits>

namespace wft {

/// Coefficients of the Glimm functional (K, H1, H2), of the distance functional
/// (kappa1, kappa2, Kbar) and of the curve functional (Kcheck, Khat).
struct FunctionalWeights {
  double K = 1.0;
  double H1 = 1.0;
  double H2 = 1.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double Kbar = 1.0;
  double Kcheck = 1.0;
  double Khat = 1.0;
  /// 1/(2 H2) when the weights come from the fitting recipe.
  double recipe_delta0 = std::numeric_limits<double>::infinity();
};

}  // namespace wft
