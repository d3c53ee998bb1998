#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mklsvm/admm.hpp"
#include "mklsvm/kernel.hpp"

namespace mklsvm {

// Kernels with weight at or below this are checked as switched off (their
// value vector must vanish) instead of through the 1/d_l stationarity terms.
inline constexpr double kActiveWeightFloor = 1e-9;

// One max-norm residual per condition group of the P-stationarity system.
//
// The solver's theta multiplies +theta^T (d - z); the nonnegativity and
// complementarity conditions are stated for the multiplier of -d >= 0, so the
// checker uses theta* = -state.theta.
struct StationarityReport {
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
  double gamma = 0.0;

  // Throws InvalidArgument for an unknown condition name.
  double operator[](std::string_view name) const;
  // P-stationary at gamma within `threshold`. This is the strongest claim the
  // checker makes: a local-minimizer certificate, never a global one.
  bool certified(double threshold) const { return max_residual <= threshold; }
};

// Condition names, in report order.
inline const std::vector<std::string>& stationarity_conditions() {
  static const std::vector<std::string> names{
      "d_nonneg",        "simplex",        "primal_u",
      "theta_nonneg",    "complementarity", "f_stationarity",
      "d_stationarity",  "y_lambda",        "prox_fixed_point"};
  return names;
}

StationarityReport check_pstationary(const SolverState& state, const GramStack& gram,
                                     const Eigen::Ref<const Vector>& labels,
                                     const Hyperparams& hp, double gamma);

}  // namespace mklsvm
