#pragma once

#include "mklsvm/types.hpp"

namespace mklsvm {

// Step size and loss weight of prox_{gamma*C*||(.)_+||_0}; the hard-threshold
// level sqrt(2*gamma*C) is derived once at construction.
class ProxParams {
 public:
  ProxParams(double gamma, double c);

  double gamma() const noexcept { return gamma_; }
  double c() const noexcept { return c_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double gamma_;
  double c_;
  double threshold_;
};

// Number of strictly positive entries, ||v_+||_0.
Index step_loss(const Eigen::Ref<const Vector>& v);

// 0 on (0, threshold], identity elsewhere. The boundary maps to 0.
inline double prox_scalar(double z, const ProxParams& p) {
  return (z > 0.0 && z <= p.threshold()) ? 0.0 : z;
}

Vector prox_vector(const Eigen::Ref<const Vector>& z, const ProxParams& p);

}  // namespace mklsvm
