#include "mklsvm/admm.hpp"

#include <algorithm>
#include <cmath>

#include "mklsvm/error.hpp"
#include "mklsvm/prox.hpp"

namespace mklsvm {

Hyperparams Hyperparams::uniform(double c, double rho, double tol, int max_iter) {
  return Hyperparams{c, rho, rho, rho, tol, max_iter};
}

double Hyperparams::threshold() const { return std::sqrt(2.0 * c / rho1); }

void Hyperparams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(c)) throw InvalidArgument("C must be positive");
  if (!positive(rho1) || !positive(rho2) || !positive(rho3))
    throw InvalidArgument("penalty parameters rho must be positive");
  if (!positive(tol)) throw InvalidArgument("tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
}

double StopReport::max_beta() const { return *std::max_element(betas.begin(), betas.end()); }

SolverState init_state(const Eigen::Ref<const Vector>& labels, std::size_t num_kernels) {
  if (labels.size() < 1) throw InvalidArgument("labels must be nonempty");
  if (num_kernels < 1) throw InvalidArgument("at least one kernel is required");
  validate_labels(labels);

  const Index m = labels.size();
  const auto L = static_cast<Index>(num_kernels);
  const Index m_pos = (labels.array() > 0.0).count();
  const Index m_neg = m - m_pos;

  SolverState s;
  s.vf = Matrix::Zero(L, m);
  s.d = Vector::Constant(L, 1.0 / static_cast<double>(L));
  // J(0, d, +1) = C m_-, J(0, d, -1) = C m_+
  s.b = m_neg <= m_pos ? 1.0 : -1.0;
  s.u = Vector::Zero(m);
  s.z = Vector::Zero(L);
  s.lambda = Vector::Zero(m);
  s.theta = Vector::Zero(L);
  s.alpha = 0.0;
  s.iter = 0;
  return s;
}

Vector compute_s(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                 const Hyperparams& hp) {
  const Vector f = state.f_values();
  return (1.0 - labels.array() * f.array() - state.b * labels.array() -
          state.lambda.array() / hp.rho1)
      .matrix();
}

UUpdate update_u(const Eigen::Ref<const Vector>& s, const Hyperparams& hp) {
  const double thr = hp.threshold();
  UUpdate out{s, {}};
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > 0.0 && s(i) <= thr) {
      out.t_k.push_back(i);
      out.u(i) = 0.0;
    }
  }
  return out;
}

namespace {

// u + D_y (sum_{t != l} v_t) + b y - 1 + lambda / rho1
Vector f_update_inner(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                      const Hyperparams& hp, const Vector& others) {
  return (state.u.array() + labels.array() * others.array() + state.b * labels.array() - 1.0 +
          state.lambda.array() / hp.rho1)
      .matrix();
}

// Sum of rows t != l, taking rows t < l from `before` and t > l from `after`.
Vector others_sum(const Matrix& before, const Matrix& after, Index l) {
  Vector sum = Vector::Zero(after.cols());
  for (Index t = 0; t < after.rows(); ++t) {
    if (t < l) sum += before.row(t).transpose();
    if (t > l) sum += after.row(t).transpose();
  }
  return sum;
}

void check_dims(const SolverState& state, const GramStack& gram,
                const Eigen::Ref<const Vector>& labels) {
  if (state.samples() != gram.samples() || labels.size() != gram.samples() ||
      static_cast<std::size_t>(state.kernels()) != gram.kernels() ||
      state.vf.rows() != state.kernels() || state.vf.cols() != state.samples())
    throw InvalidArgument("solver state does not match the gram stack");
}

}  // namespace

Matrix update_f(const SolverState& state, const GramStack& gram,
                const Eigen::Ref<const Vector>& labels, const Hyperparams& hp,
                Coupling coupling) {
  check_dims(state, gram, labels);
  const Index m = state.samples();
  Matrix next = Matrix::Zero(state.kernels(), m);
  for (Index l = 0; l < state.kernels(); ++l) {
    const double dl = state.d(l);
    if (!(dl > 0.0)) continue;  // f_l stays zero
    const Matrix& k = gram.matrix(static_cast<std::size_t>(l));

    const Vector others = coupling == Coupling::Jacobi ? others_sum(state.vf, state.vf, l)
                                                       : others_sum(next, state.vf, l);
    const Vector inner = f_update_inner(state, labels, hp, others);
    const Vector rhs = -hp.rho1 * (k * labels.cwiseProduct(inner));

    Matrix coeff = hp.rho1 * k;
    coeff.diagonal().array() += 1.0 / dl;
    Eigen::LLT<Matrix> llt(coeff);
    if (llt.info() != Eigen::Success) throw Error("f-update coefficient matrix is not positive definite");
    next.row(l) = llt.solve(rhs).transpose();
  }
  return next;
}

double update_b(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                const Hyperparams& hp) {
  const auto m = static_cast<double>(state.samples());
  const Vector f = state.f_values();
  const double label_term =
      labels.dot((1.0 - state.u.array() - state.lambda.array() / hp.rho1).matrix());
  return (label_term - f.sum()) / m;
}

ZUpdate update_z(const SolverState& state, const Hyperparams& hp) {
  ZUpdate out{Vector::Zero(state.kernels()), {}};
  for (Index l = 0; l < state.kernels(); ++l) {
    const double v = state.d(l) + state.theta(l) / hp.rho2;
    if (v > 0.0) {
      out.s_k.push_back(l);
      out.z(l) = v;
    }
  }
  return out;
}

CubicCoeffs d_cubic(const SolverState& state, const GramStack& gram, const Hyperparams& hp,
                    std::size_t l) {
  const auto li = static_cast<Index>(l);
  const double q = gram.quad_form_inv(l, state.vf.row(li).transpose());
  const double rest = state.d.sum() - state.d(li);
  CubicCoeffs c;
  c.a3 = hp.rho2 + hp.rho3;
  c.a2 = state.theta(li) + state.alpha - hp.rho2 * state.z(li) + hp.rho3 * (rest - 1.0);
  c.a1 = 0.0;
  c.a0 = -0.5 * q;
  return c;
}

Vector update_d(const SolverState& state, const GramStack& gram, const Hyperparams& hp,
                const IndexSet& s_k, Coupling coupling) {
  Vector next = Vector::Zero(state.kernels());
  std::vector<bool> selected(static_cast<std::size_t>(state.kernels()), false);
  for (Index l : s_k) selected[static_cast<std::size_t>(l)] = true;
  // Gauss-Seidel reads the weights already updated in this pass.
  SolverState mixed;
  if (coupling == Coupling::GaussSeidel) mixed = state;
  const SolverState& source = coupling == Coupling::GaussSeidel ? mixed : state;
  for (Index l = 0; l < state.kernels(); ++l) {
    if (selected[static_cast<std::size_t>(l)]) {
      const CubicCoeffs c = d_cubic(source, gram, hp, static_cast<std::size_t>(l));
      // No positive root only when ||f_l|| = 0; the weight then drops to zero.
      next(l) = select_positive_root(real_roots_cubic(c)).value_or(0.0);
    }
    if (coupling == Coupling::GaussSeidel) mixed.d(l) = next(l);
  }
  return next;
}

Vector update_theta(const SolverState& state, const Hyperparams& hp, const IndexSet& s_k) {
  Vector next = state.theta;
  for (Index l : s_k) next(l) += hp.rho2 * (state.d(l) - state.z(l));
  return next;
}

double update_alpha(const SolverState& state, const Hyperparams& hp) {
  return state.alpha + hp.rho3 * (state.d.sum() - 1.0);
}

Vector update_lambda(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                     const Hyperparams& hp, const IndexSet& t_k) {
  const Vector f = state.f_values();
  Vector next = Vector::Zero(state.samples());
  for (Index i : t_k) {
    const double r = state.u(i) + labels(i) * f(i) + state.b * labels(i) - 1.0;
    next(i) = state.lambda(i) + hp.rho1 * r;
  }
  return next;
}

StopReport check_stop(const SolverState& prev, const SolverState& cur, const Hyperparams& hp) {
  StopReport r;
  r.betas = {(cur.u - prev.u).norm(),          (cur.vf - prev.vf).norm(),
             std::abs(cur.b - prev.b),         (cur.z - prev.z).norm(),
             (cur.d - prev.d).norm(),          (cur.theta - prev.theta).norm(),
             std::abs(cur.alpha - prev.alpha), (cur.lambda - prev.lambda).norm()};
  r.converged = r.max_beta() < hp.tol;
  r.iterations = cur.iter;
  return r;
}

double f_update_residual(const SolverState& before, const GramStack& gram,
                         const Eigen::Ref<const Vector>& labels, const Hyperparams& hp,
                         const Matrix& vf_next, Coupling coupling) {
  const Index m = before.samples();
  double worst = 0.0;
  for (Index l = 0; l < before.kernels(); ++l) {
    const double dl = before.d(l);
    if (!(dl > 0.0)) continue;
    const Matrix& k = gram.matrix(static_cast<std::size_t>(l));
    Vector w(m);
    for (Index i = 0; i < m; ++i) {
      double others = 0.0;
      for (Index t = 0; t < before.kernels(); ++t) {
        if (t == l) continue;
        const bool fresh = coupling == Coupling::GaussSeidel && t < l;
        others += fresh ? vf_next(t, i) : before.vf(t, i);
      }
      w(i) = labels(i) * (before.u(i) + labels(i) * others + before.b * labels(i) - 1.0 +
                          before.lambda(i) / hp.rho1);
    }
    const Matrix a = Matrix::Identity(m, m) / dl + hp.rho1 * k;
    const Vector rhs = -hp.rho1 * (k * w);
    const Vector v = vf_next.row(l).transpose();
    const double denom = a.norm() * v.norm() + rhs.norm();
    if (denom > 0.0) worst = std::max(worst, (a * v - rhs).norm() / denom);
  }
  return worst;
}

double b_update_residual(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                         const Hyperparams& hp) {
  const Vector f = state.f_values();
  double g = 0.0;
  double scale = 0.0;
  for (Index i = 0; i < state.samples(); ++i) {
    const double yi = labels(i);
    g += state.lambda(i) * yi + hp.rho1 * yi * (state.u(i) + yi * (f(i) + state.b) - 1.0);
    scale += std::abs(state.lambda(i)) +
             hp.rho1 * (std::abs(state.u(i)) + std::abs(f(i)) + std::abs(state.b) + 1.0);
  }
  return scale > 0.0 ? std::abs(g) / scale : 0.0;
}

double d_update_residual(const SolverState& before, const GramStack& gram, const Hyperparams& hp,
                         const IndexSet& s_k, const Vector& d_next, Coupling coupling) {
  double worst = 0.0;
  for (Index l : s_k) {
    const double dl = d_next(l);
    if (!(dl > 0.0)) continue;
    const Vector v = before.vf.row(l).transpose();
    const double q = v.dot(gram.matrix(static_cast<std::size_t>(l)).ldlt().solve(v));
    double rest = 0.0;
    for (Index t = 0; t < before.kernels(); ++t) {
      if (t == l) continue;
      rest += (coupling == Coupling::GaussSeidel && t < l) ? d_next(t) : before.d(t);
    }
    const double a3 = hp.rho2 + hp.rho3;
    const double a2 = before.theta(l) + before.alpha - hp.rho2 * before.z(l) + hp.rho3 * (rest - 1.0);
    const double a0 = -0.5 * q;
    const double p = a3 * dl * dl * dl + a2 * dl * dl + a0;
    worst = std::max(worst, std::abs(p) / (1.0 + std::max({std::abs(a3), std::abs(a2), std::abs(a0)})));
  }
  return worst;
}

TrainedModel export_model(const SolverState& state, const Dataset& data, const KernelBank& bank,
                          const Hyperparams& hp, double jitter) {
  const Vector s = compute_s(state, data.labels, hp);
  const double thr = hp.threshold();
  TrainedModel model{.anchors = data.points,
                     .anchor_labels = data.labels,
                     .lambda_star = Vector::Zero(data.size()),
                     .d_star = state.d,
                     .b_star = state.b,
                     .bank = bank,
                     .support_idx = {},
                     .c = hp.c,
                     .rho1 = hp.rho1,
                     .jitter = jitter};
  for (Index i = 0; i < data.size(); ++i) {
    if (s(i) > 0.0 && s(i) <= thr && state.lambda(i) != 0.0) {
      model.support_idx.push_back(i);
      model.lambda_star(i) = state.lambda(i);
    }
  }
  return model;
}

TrainResult train(const Dataset& data, const KernelBank& bank, const Hyperparams& hp,
                  const TrainOptions& options) {
  data.validate();
  const GramStack gram = GramStack::build(bank, data.points, options.jitter);
  return train(data, gram, bank, hp, options);
}

TrainResult train(const Dataset& data, const GramStack& gram, const KernelBank& bank,
                  const Hyperparams& hp, const TrainOptions& options) {
  data.validate();
  hp.validate();
  if (gram.samples() != data.size() || gram.kernels() != bank.size())
    throw InvalidArgument("gram stack does not match the dataset or kernel bank");

  const Vector& y = data.labels;
  SolverState state = init_state(y, bank.size());
  SolverState prev = state;
  StopReport report;
  WorkingSets sets;
  SweepDiagnostics diag;

  for (int k = 0; k < hp.max_iter; ++k) {
    const Vector s = compute_s(state, y, hp);
    UUpdate uu = update_u(s, hp);
    state.u = std::move(uu.u);
    sets.t_k = std::move(uu.t_k);

    Matrix vf = update_f(state, gram, y, hp, options.coupling);
    if (options.diagnostics) diag.f_residual = f_update_residual(state, gram, y, hp, vf, options.coupling);
    state.vf = std::move(vf);

    state.b = update_b(state, y, hp);
    if (options.diagnostics) diag.b_residual = b_update_residual(state, y, hp);

    ZUpdate zu = update_z(state, hp);
    state.z = std::move(zu.z);
    sets.s_k = std::move(zu.s_k);

    Vector d = update_d(state, gram, hp, sets.s_k, options.coupling);
    if (options.diagnostics)
      diag.d_residual = d_update_residual(state, gram, hp, sets.s_k, d, options.coupling);
    state.d = std::move(d);
    // A zero weight admits only the zero function.
    for (Index l = 0; l < state.kernels(); ++l)
      if (state.d(l) == 0.0) state.vf.row(l).setZero();

    state.theta = update_theta(state, hp, sets.s_k);
    state.alpha = update_alpha(state, hp);
    state.lambda = update_lambda(state, y, hp, sets.t_k);
    state.iter = k + 1;

    report = check_stop(prev, state, hp);
    if (options.on_sweep)
      options.on_sweep(SweepTrace{state, sets, report, options.diagnostics ? &diag : nullptr});
    if (report.converged) break;
    prev = state;
  }

  TrainedModel model = export_model(state, data, bank, hp, options.jitter);
  return TrainResult{std::move(model), report, std::move(state)};
}

}  // namespace mklsvm
