#include "mklsvm/stationarity.hpp"

#include <algorithm>
#include <cmath>

#include "mklsvm/error.hpp"
#include "mklsvm/prox.hpp"

namespace mklsvm {

double StationarityReport::operator[](std::string_view name) const {
  for (const auto& [key, value] : residuals)
    if (key == name) return value;
  throw InvalidArgument("unknown stationarity condition '" + std::string(name) + "'");
}

StationarityReport check_pstationary(const SolverState& state, const GramStack& gram,
                                     const Eigen::Ref<const Vector>& labels,
                                     const Hyperparams& hp, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const Index m = state.samples();
  const Index L = state.kernels();
  if (labels.size() != m || gram.samples() != m || static_cast<std::size_t>(L) != gram.kernels())
    throw InvalidArgument("state, labels and gram stack disagree in size");

  const Vector theta_star = -state.theta;
  const Vector f = state.f_values();
  const Vector y_lambda = labels.cwiseProduct(state.lambda);

  double d_nonneg = 0.0;
  double theta_nonneg = 0.0;
  double complementarity = 0.0;
  double f_stat = 0.0;
  double d_stat = 0.0;
  for (Index l = 0; l < L; ++l) {
    const double dl = state.d(l);
    d_nonneg = std::max(d_nonneg, std::max(0.0, -dl));
    theta_nonneg = std::max(theta_nonneg, std::max(0.0, -theta_star(l)));
    complementarity = std::max(complementarity, std::abs(theta_star(l) * dl));

    const auto li = static_cast<std::size_t>(l);
    const Vector vl = state.vf.row(l).transpose();
    if (dl > kActiveWeightFloor) {
      // v_l = -d_l K_l D_y lambda
      const Vector gap = vl + dl * (gram.matrix(li) * y_lambda);
      f_stat = std::max(f_stat, gap.lpNorm<Eigen::Infinity>());
      const double q = gram.quad_form_inv(li, vl);
      d_stat = std::max(d_stat, std::abs(-q / (2.0 * dl * dl) + state.alpha - theta_star(l)));
    } else {
      f_stat = std::max(f_stat, vl.lpNorm<Eigen::Infinity>());
    }
  }

  const Vector primal = state.u + labels.cwiseProduct(f) + state.b * labels - Vector::Ones(m);
  const ProxParams prox(gamma, hp.c);
  const Vector prox_gap = prox_vector(state.u - gamma * state.lambda, prox) - state.u;

  StationarityReport r;
  r.gamma = gamma;
  r.residuals = {{"d_nonneg", d_nonneg},
                 {"simplex", std::abs(state.d.sum() - 1.0)},
                 {"primal_u", primal.lpNorm<Eigen::Infinity>()},
                 {"theta_nonneg", theta_nonneg},
                 {"complementarity", complementarity},
                 {"f_stationarity", f_stat},
                 {"d_stationarity", d_stat},
                 {"y_lambda", std::abs(labels.dot(state.lambda))},
                 {"prox_fixed_point", prox_gap.lpNorm<Eigen::Infinity>()}};
  for (const auto& [name, value] : r.residuals) r.max_residual = std::max(r.max_residual, value);
  return r;
}

}  // namespace mklsvm
