#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mklsvm/error.hpp"
#include "mklsvm/prox.hpp"

using namespace mklsvm;

namespace {

// Minimizer of c * [v > 0] + (v - z)^2 / (2 gamma) over the candidates {0, z}.
double brute_prox(double z, double gamma, double c) {
  auto cost = [&](double v) { return c * (v > 0.0 ? 1.0 : 0.0) + (v - z) * (v - z) / (2.0 * gamma); };
  const double at_zero = cost(0.0);
  const double at_z = cost(z);
  return at_zero <= at_z ? 0.0 : z;
}

}  // namespace

TEST_SUITE("prox") {

TEST_CASE("step loss counts strictly positive entries") {
  CHECK(step_loss(Vector::Zero(3)) == 0);
  Vector v(3);
  v << -1, 0, 2;
  CHECK(step_loss(v) == 1);
  CHECK(step_loss(Vector::Constant(3, 0.1)) == 3);
}

TEST_CASE("scalar prox branches") {
  const ProxParams p(1.0, 2.0);
  CHECK(p.threshold() == doctest::Approx(2.0));
  CHECK(prox_scalar(-1.0, p) == -1.0);
  CHECK(prox_scalar(2.0, p) == 0.0);
  CHECK(prox_scalar(2.5, p) == 2.5);
  CHECK(prox_scalar(0.0, p) == 0.0);
}

TEST_CASE("vector prox") {
  Vector z(3);
  z << -1, 1, 3;
  const Vector out = prox_vector(z, ProxParams(1.0, 2.0));
  CHECK(out(0) == -1.0);
  CHECK(out(1) == 0.0);
  CHECK(out(2) == 3.0);

  CHECK(prox_vector(Vector::Zero(4), ProxParams(1.0, 2.0)).isZero(0.0));

  Vector w(3);
  w << 0.5, 1.0, 1.5;
  const ProxParams half(1.0, 0.5);
  const Vector got = prox_vector(w, half);
  for (Index i = 0; i < 3; ++i) CHECK(got(i) == brute_prox(w(i), 1.0, 0.5));
  CHECK(got(0) == 0.0);
  CHECK(got(1) == 0.0);
  CHECK(got(2) == 1.5);
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(ProxParams(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ProxParams(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(ProxParams(std::nan(""), 1.0), InvalidArgument);
}

TEST_CASE("closed form agrees with the candidate oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> zs(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(0.0, 4.0);
  for (int k = 0; k < 20000; ++k) {
    double gamma = pos(rng), c = pos(rng);
    if (gamma == 0.0 || c == 0.0) continue;
    const double z = zs(rng);
    const ProxParams p(gamma, c);
    CHECK(prox_scalar(z, p) == brute_prox(z, gamma, c));
  }
}

TEST_CASE("tie at the threshold resolves to zero") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double c : {0.5, 2.0}) {
      const ProxParams p(gamma, c);
      CHECK(prox_scalar(p.threshold(), p) == 0.0);
      CHECK(prox_scalar(std::nextafter(p.threshold(), 10.0), p) > 0.0);
    }
  }
}

TEST_CASE("idempotent, selective and loss-reducing") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Vector z = testing::random_vector(20, rng, -3.0, 3.0);
    const ProxParams p(0.7, 1.3);
    const Vector once = prox_vector(z, p);
    CHECK(prox_vector(once, p) == once);
    for (Index i = 0; i < z.size(); ++i) CHECK((once(i) == 0.0 || once(i) == z(i)));
    CHECK(step_loss(once) <= step_loss(z));
  }
}

}
