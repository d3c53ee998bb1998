#include "mklsvm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mklsvm/error.hpp"

namespace mklsvm {

double CubicCoeffs::max_abs_coeff() const {
  return std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
}

namespace {

double polish(const CubicCoeffs& c, double x) {
  const double slope = c.derivative(x);
  if (slope == 0.0 || !std::isfinite(slope)) return x;
  const double next = x - c(x) / slope;
  return std::abs(c(next)) <= std::abs(c(x)) ? next : x;
}

// Roots of the depressed cubic t^3 + p t + q = 0.
std::vector<double> depressed_roots(double p, double q) {
  constexpr double eps = 64.0 * std::numeric_limits<double>::epsilon();
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double cube = third_p * third_p * third_p;
  const double disc = half_q * half_q + cube;
  const double scale = half_q * half_q + std::abs(cube);

  if (scale == 0.0) return {0.0};

  if (std::abs(disc) <= eps * scale) {
    // Repeated root. p != 0 here because scale > 0 and disc ~ 0.
    return {3.0 * q / p, -1.5 * q / p};
  }
  if (disc > 0.0) {
    // Single real root; the sign choice avoids cancellation.
    const double a = -std::copysign(std::cbrt(std::abs(half_q) + std::sqrt(disc)), q);
    const double b = a != 0.0 ? -third_p / a : 0.0;
    return {a + b};
  }
  const double r = 2.0 * std::sqrt(-third_p);
  const double arg = std::clamp((3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  constexpr double shift = 2.0 * std::numbers::pi / 3.0;
  return {r * std::cos(phi), r * std::cos(phi - shift), r * std::cos(phi - 2.0 * shift)};
}

}  // namespace

std::vector<double> real_roots_cubic(const CubicCoeffs& c, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("cubic root tolerance must be positive");
  if (!(std::abs(c.a3) > tol)) throw InvalidArgument("cubic leading coefficient is degenerate");

  const double a = c.a2 / c.a3;
  const double b = c.a1 / c.a3;
  const double d = c.a0 / c.a3;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;

  const std::vector<double> shifted = depressed_roots(p, q);
  std::vector<double> roots;
  if (shifted.size() == 1) {
    roots.push_back(polish(c, shifted.front() - a / 3.0));
  } else {
    // Keep only the dominant root from the closed form and recover the other
    // two from the sum and product of all roots, which keeps small roots
    // accurate when a0 is tiny.
    double big = 0.0;
    for (double t : shifted)
      if (std::abs(t - a / 3.0) >= std::abs(big)) big = t - a / 3.0;
    big = polish(c, big);
    roots.push_back(big);
    if (big == 0.0) {
      roots.push_back(0.0);
    } else {
      const double sum = -a - big;
      const double prod = -d / big;
      double disc = sum * sum - 4.0 * prod;
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (sum * sum + 4.0 * std::abs(prod));
      if (disc < 0.0 && disc >= -slack) disc = 0.0;
      if (disc >= 0.0) {
        const double h = 0.5 * (sum + std::copysign(std::sqrt(disc), sum));
        roots.push_back(polish(c, h));
        roots.push_back(polish(c, h != 0.0 ? prod / h : 0.0));
      }
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > tol * std::max(1.0, std::abs(r)))
      unique.push_back(r);
  }
  return unique;
}

std::optional<double> select_positive_root(std::span<const double> roots) {
  std::optional<double> best;
  for (double r : roots) {
    if (r > kPositiveRootCutoff && (!best || std::abs(r) > std::abs(*best))) best = r;
  }
  return best;
}

}  // namespace mklsvm
