#pragma once

#include <optional>
#include <span>
#include <vector>

namespace mklsvm {

// a3*x^3 + a2*x^2 + a1*x + a0
struct CubicCoeffs {
  double a3 = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  double operator()(double x) const { return ((a3 * x + a2) * x + a1) * x + a0; }
  double derivative(double x) const { return (3.0 * a3 * x + 2.0 * a2) * x + a1; }
  double max_abs_coeff() const;
};

// Roots at or below this are treated as round-off, not positive.
inline constexpr double kPositiveRootCutoff = 1e-12;

// All real roots, ascending, deduplicated at `tol`. Closed form (Cardano or
// trigonometric) followed by one Newton step per root. Throws InvalidArgument
// if |a3| <= tol.
std::vector<double> real_roots_cubic(const CubicCoeffs& c, double tol = 1e-12);

// Largest-magnitude root above kPositiveRootCutoff, if any.
std::optional<double> select_positive_root(std::span<const double> roots);

}  // namespace mklsvm
