#include "mklsvm/prox.hpp"

#include <cmath>

#include "mklsvm/error.hpp"

namespace mklsvm {

ProxParams::ProxParams(double gamma, double c)
    : gamma_(gamma), c_(c), threshold_(std::sqrt(2.0 * gamma * c)) {
  if (!(gamma > 0.0) || !(c > 0.0)) throw InvalidArgument("prox requires gamma > 0 and C > 0");
}

Index step_loss(const Eigen::Ref<const Vector>& v) {
  return (v.array() > 0.0).count();
}

Vector prox_vector(const Eigen::Ref<const Vector>& z, const ProxParams& p) {
  return z.unaryExpr([&p](double zi) { return prox_scalar(zi, p); });
}

}  // namespace mklsvm
