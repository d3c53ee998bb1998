#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>

#include "mklsvm/data.hpp"
#include "mklsvm/kernel.hpp"
#include "mklsvm/model.hpp"
#include "mklsvm/numeric.hpp"
#include "mklsvm/types.hpp"

namespace mklsvm {

struct Hyperparams {
  double c = 1.0;
  double rho1 = 1.0;
  double rho2 = 1.0;
  double rho3 = 1.0;
  double tol = 1e-3;
  int max_iter = 1000;

  // rho1 = rho2 = rho3 = rho.
  static Hyperparams uniform(double c, double rho, double tol = 1e-3, int max_iter = 1000);

  // Prox step of the u-subproblem; also the gamma at which a limit point is
  // P-stationary.
  double gamma() const noexcept { return 1.0 / rho1; }
  // sqrt(2C / rho1), the upper end of the data working-set interval.
  double threshold() const;
  // Throws InvalidArgument unless every field is positive and finite.
  void validate() const;
};

// All ADMM iterates. Row l of `vf` holds the values of f_l at the training
// points. `theta` is the multiplier of d = z in the augmented Lagrangian,
// i.e. it enters as +theta^T (d - z).
struct SolverState {
  Matrix vf;
  Vector d;
  double b = 0.0;
  Vector u;
  Vector z;
  Vector lambda;
  Vector theta;
  double alpha = 0.0;
  int iter = 0;

  Index samples() const noexcept { return u.size(); }
  Index kernels() const noexcept { return d.size(); }
  // Sum over kernels of the value vectors, i.e. f at the training points.
  Vector f_values() const { return vf.colwise().sum().transpose(); }
};

struct WorkingSets {
  IndexSet t_k;  // data indices with s_i in (0, sqrt(2C/rho1)]
  IndexSet s_k;  // kernel indices with d_l + theta_l / rho2 > 0
};

struct StopReport {
  std::array<double, 8> betas{};
  bool converged = false;
  int iterations = 0;

  double max_beta() const;
};

// How the per-kernel f- and d-updates see the other kernels within a sweep.
// Jacobi reads iterate k for every other kernel; with many kernels each one
// then solves for the whole residual and the whole simplex, which overshoots
// and can switch every kernel off for good. Gauss-Seidel is the default.
enum class Coupling {
  Jacobi,      // other kernels taken from iterate k
  GaussSeidel  // kernels updated in index order, each seeing the fresh values before it
};

// u = lambda = theta = vf = z = 0, alpha = 0, d = 1/L, and b = +1 when
// m_- <= m_+ (else -1) so the starting objective is C min(m_+, m_-).
SolverState init_state(const Eigen::Ref<const Vector>& labels, std::size_t num_kernels);

// s = 1 - D_y f - b y - lambda / rho1.
Vector compute_s(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                 const Hyperparams& hp);

struct UUpdate {
  Vector u;
  IndexSet t_k;
};
UUpdate update_u(const Eigen::Ref<const Vector>& s, const Hyperparams& hp);

// Expects state.u at k+1; every other field at k.
Matrix update_f(const SolverState& state, const GramStack& gram,
                const Eigen::Ref<const Vector>& labels, const Hyperparams& hp,
                Coupling coupling = Coupling::GaussSeidel);

// Expects u and vf at k+1, lambda at k.
double update_b(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                const Hyperparams& hp);

struct ZUpdate {
  Vector z;
  IndexSet s_k;
};
ZUpdate update_z(const SolverState& state, const Hyperparams& hp);

// Coefficients of the d_l stationarity equation multiplied through by d_l^2.
// Expects vf and z at k+1; d, theta and alpha at k.
CubicCoeffs d_cubic(const SolverState& state, const GramStack& gram, const Hyperparams& hp,
                    std::size_t l);
Vector update_d(const SolverState& state, const GramStack& gram, const Hyperparams& hp,
                const IndexSet& s_k, Coupling coupling = Coupling::GaussSeidel);

Vector update_theta(const SolverState& state, const Hyperparams& hp, const IndexSet& s_k);
double update_alpha(const SolverState& state, const Hyperparams& hp);
// r = u + D_y f + b y - 1 from the k+1 values; lambda is zeroed off t_k.
Vector update_lambda(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                     const Hyperparams& hp, const IndexSet& t_k);

StopReport check_stop(const SolverState& prev, const SolverState& cur, const Hyperparams& hp);

// Independent residual checks of the subproblem solutions. Each rebuilds the
// equation from its definition rather than reusing the solver path.
//
// Max over kernels with d_l > 0 of ||A v - rhs|| / (||A|| ||v|| + ||rhs||)
// for ((1/d_l) I + rho1 K_l) v = rhs. `before` is the state passed to update_f.
double f_update_residual(const SolverState& before, const GramStack& gram,
                         const Eigen::Ref<const Vector>& labels, const Hyperparams& hp,
                         const Matrix& vf_next, Coupling coupling = Coupling::GaussSeidel);
// |sum lambda_i y_i + rho1 sum y_i (u_i + y_i (f_i + b) - 1)| relative to the
// magnitude of its terms; `state` carries the new b.
double b_update_residual(const SolverState& state, const Eigen::Ref<const Vector>& labels,
                         const Hyperparams& hp);

// Max over accepted positive roots of |p(d_l)| / (1 + max |coeff|), with the
// cubic rebuilt from a dense solve for q. `before` is the state passed to
// update_d.
double d_update_residual(const SolverState& before, const GramStack& gram, const Hyperparams& hp,
                         const IndexSet& s_k, const Vector& d_next,
                         Coupling coupling = Coupling::GaussSeidel);

struct SweepDiagnostics {
  double f_residual = 0.0;
  double b_residual = 0.0;
  double d_residual = 0.0;
};

struct SweepTrace {
  const SolverState& state;
  const WorkingSets& sets;
  const StopReport& report;
  const SweepDiagnostics* diagnostics;  // null unless requested
};

struct TrainOptions {
  Coupling coupling = Coupling::GaussSeidel;
  double jitter = 0.0;
  bool diagnostics = false;
  std::function<void(const SweepTrace&)> on_sweep;
};

struct TrainResult {
  TrainedModel model;
  StopReport report;
  SolverState state;
};

// Runs sweeps in the order T_k, u, f, b, z, d, theta, alpha, lambda until the
// successive-iterate test passes or max_iter sweeps are done. Hitting
// max_iter is reported, not thrown.
TrainResult train(const Dataset& data, const KernelBank& bank, const Hyperparams& hp,
                  const TrainOptions& options = {});
// Same, reusing a Gram stack built on data.points.
TrainResult train(const Dataset& data, const GramStack& gram, const KernelBank& bank,
                  const Hyperparams& hp, const TrainOptions& options = {});

// Classifier from a solver state. The support set is recomputed from the
// state's s-vector with the (0, sqrt(2C/rho1)] rule, intersected with the
// nonzero entries of lambda; lambda is zeroed outside it.
TrainedModel export_model(const SolverState& state, const Dataset& data, const KernelBank& bank,
                          const Hyperparams& hp, double jitter = 0.0);

// Text snapshot of a solver state together with the hyperparameters that
// produced it, consumed by the stationarity check.
struct SavedState {
  SolverState state;
  Hyperparams hp;
};
void write_state(const SolverState& state, const Hyperparams& hp, std::ostream& os);
SavedState read_state(std::istream& is);
void save_state(const SolverState& state, const Hyperparams& hp, const std::filesystem::path& path);
SavedState load_state(const std::filesystem::path& path);

}  // namespace mklsvm
