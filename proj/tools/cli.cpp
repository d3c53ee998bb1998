#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>

#include "mklsvm/admm.hpp"
#include "mklsvm/data.hpp"
#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"
#include "mklsvm/kernel.hpp"
#include "mklsvm/model.hpp"
#include "mklsvm/stationarity.hpp"
#include "mklsvm/tuning.hpp"

namespace mklsvm::cli {
namespace {

struct GenDataFlags {
  long long m = 0;
  double margin = 0.05;
  std::uint64_t seed = 0;
  double train_frac = 0.5;
  std::string train_out;
  std::string test_out;
};

struct SolverFlags {
  std::string kernels;
  double tol = 1e-3;
  int max_iter = 1000;
  double jitter = 0.0;
  bool jacobi = false;

  KernelBank bank() const {
    return kernels.empty() ? KernelBank::reference_gaussians() : read_kernel_bank(kernels);
  }
  TrainOptions options() const {
    TrainOptions o;
    o.coupling = jacobi ? Coupling::Jacobi : Coupling::GaussSeidel;
    o.jitter = jitter;
    return o;
  }
};

struct TrainFlags {
  std::string train;
  double c = 0.0;
  double rho = 0.0;
  std::string model_out;
  std::string state_out;
  SolverFlags solver;
};

struct EvalFlags {
  std::string model;
  std::string test;
};

struct PredictFlags {
  std::string model;
  std::string input;
  std::string out;
};

struct CvFlags {
  std::string train;
  std::vector<double> c_grid = default_c_grid();
  std::vector<double> rho_grid = default_rho_grid();
  int folds = 10;
  std::uint64_t seed = 0;
  bool no_stratify = false;
  unsigned threads = 0;
  std::string table_out;
  SolverFlags solver;
};

struct CheckFlags {
  std::string model;
  std::string state;
  double threshold = 1e-2;
  std::optional<double> gamma;
};

struct BoundaryFlags {
  std::string model;
  std::vector<double> x_range{-1.0, 1.0};
  std::vector<double> y_range{-1.0, 1.0};
  long long resolution = 200;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--kernels", f.kernels,
                  "Kernel bank file, one 'gaussian <sigma>' or 'poly <degree>' per line "
                  "(default: the ten reference Gaussians)");
  cmd->add_option("--tol", f.tol, "Stopping tolerance")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Sweep limit")->capture_default_str();
  cmd->add_option("--jitter", f.jitter, "Added to every Gram diagonal")->capture_default_str();
  cmd->add_flag("--jacobi", f.jacobi, "Update kernels from the previous sweep only");
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

int cmd_gen_data(const GenDataFlags& f, std::ostream& out) {
  if (f.m < 1) throw InvalidArgument("--m must be at least 1");
  if (!(f.margin >= 0.0 && f.margin < 0.5)) throw InvalidArgument("--margin must lie in [0, 0.5)");
  if (!(f.train_frac > 0.0 && f.train_frac < 1.0))
    throw InvalidArgument("--train-frac must lie in (0, 1)");
  const Dataset all = gen_quadrant_data(static_cast<Index>(f.m), f.margin, f.seed);
  auto [train, test] = split(all, f.train_frac, f.seed);
  write_csv(train, f.train_out);
  write_csv(test, f.test_out);
  out << "train_rows " << train.size() << "\ntest_rows " << test.size() << '\n';
  return kOk;
}

int cmd_train(const TrainFlags& f, std::ostream& out) {
  const Hyperparams hp = Hyperparams::uniform(f.c, f.rho, f.solver.tol, f.solver.max_iter);
  hp.validate();
  if (f.solver.jitter < 0.0) throw InvalidArgument("--jitter must be nonnegative");
  const Dataset data = read_csv(f.train);
  const KernelBank bank = f.solver.bank();
  const TrainResult result = train(data, bank, hp, f.solver.options());

  save_model(result.model, f.model_out);
  if (!f.state_out.empty()) save_state(result.state, hp, f.state_out);

  out << "iterations " << result.report.iterations << '\n'
      << "converged " << yes_no(result.report.converged) << '\n'
      << "max_beta " << result.report.max_beta() << '\n'
      << "nsv " << result.model.support_idx.size() << '\n'
      << "training_tacc " << evaluate(result.model, data).tacc << '\n';
  const IndexSet active = result.model.active_kernels();
  out << "active_kernels " << active.size() << '\n';
  for (Index l : active)
    out << "kernel " << l << " " << bank[static_cast<std::size_t>(l)].to_string() << " weight "
        << result.model.d_star(l) << '\n';
  return kOk;
}

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  const TrainedModel model = load_model(f.model);
  const EvalMetrics m = evaluate(model, read_csv(f.test));
  out << "tacc " << m.tacc << "\nnsv " << m.nsv << '\n';
  return kOk;
}

int cmd_predict(const PredictFlags& f, std::ostream& out) {
  const TrainedModel model = load_model(f.model);
  const PointMatrix points = read_points_csv(f.input);
  if (points.cols() != model.dim())
    throw InvalidArgument("input has " + std::to_string(points.cols()) +
                          " features but the model expects " + std::to_string(model.dim()));
  Dataset labelled{points, Vector(points.rows())};
  for (Index i = 0; i < points.rows(); ++i)
    labelled.labels(i) = predict(model, {points.row(i).data(), static_cast<std::size_t>(points.cols())});
  if (f.out.empty()) {
    out << std::setprecision(17);
    for (Index k = 0; k < points.cols(); ++k) out << 'x' << k + 1 << ',';
    out << "y\n";
    for (Index i = 0; i < points.rows(); ++i) {
      for (Index k = 0; k < points.cols(); ++k) out << points(i, k) << ',';
      out << static_cast<int>(labelled.labels(i)) << '\n';
    }
  } else {
    write_csv(labelled, f.out);
    out << "predictions " << points.rows() << '\n';
  }
  return kOk;
}

int cmd_cv(const CvFlags& f, std::ostream& out) {
  GridSpec grid;
  grid.c_grid = f.c_grid;
  grid.rho_grid = f.rho_grid;
  grid.folds = f.folds;
  grid.seed = f.seed;
  grid.stratify = !f.no_stratify;
  grid.validate();
  Hyperparams base = Hyperparams::uniform(1.0, 1.0, f.solver.tol, f.solver.max_iter);
  base.validate();
  if (f.solver.jitter < 0.0) throw InvalidArgument("--jitter must be nonnegative");

  const Dataset data = read_csv(f.train);
  const CvResult result =
      grid_search_cv(data, f.solver.bank(), grid, base, f.solver.options(), f.threads);
  if (!f.table_out.empty()) write_cv_table(result, f.table_out);

  int failures = 0;
  for (const auto& cell : result.table) failures += cell.failures;
  out << "cells " << result.table.size() << '\n'
      << "best_c " << result.best_c << '\n'
      << "best_rho " << result.best_rho << '\n'
      << "best_mean_tacc " << result.best_score << '\n'
      << "failed_fits " << failures << '\n';
  return kOk;
}

int cmd_check(const CheckFlags& f, std::ostream& out) {
  if (!(f.threshold >= 0.0)) throw InvalidArgument("--threshold must be nonnegative");
  if (f.gamma && !(*f.gamma > 0.0)) throw InvalidArgument("--gamma must be positive");
  const TrainedModel model = load_model(f.model);
  const SavedState saved = load_state(f.state);
  if (saved.state.samples() != model.anchors.rows() ||
      static_cast<std::size_t>(saved.state.kernels()) != model.bank.size())
    throw InvalidArgument("state file does not belong to this model");

  const GramStack gram = GramStack::build(model.bank, model.anchors, model.jitter);
  const double gamma = f.gamma.value_or(saved.hp.gamma());
  const StationarityReport report =
      check_pstationary(saved.state, gram, model.anchor_labels, saved.hp, gamma);

  out << std::setprecision(6);
  for (const auto& [name, value] : report.residuals) out << name << ' ' << value << '\n';
  out << "gamma " << report.gamma << '\n'
      << "max_residual " << report.max_residual << '\n'
      << "threshold " << f.threshold << '\n'
      << "pstationary " << yes_no(report.certified(f.threshold)) << '\n';
  return report.certified(f.threshold) ? kOk : kQuantitativeFailure;
}

int cmd_boundary(const BoundaryFlags& f, std::ostream& out) {
  if (f.x_range.size() != 2 || f.y_range.size() != 2)
    throw InvalidArgument("ranges take two values: lo,hi");
  const TrainedModel model = load_model(f.model);
  const BoundaryGrid grid = boundary_grid(model, {f.x_range[0], f.x_range[1]},
                                          {f.y_range[0], f.y_range[1]},
                                          static_cast<Index>(f.resolution));
  write_grid_csv(grid, f.out);
  out << "rows " << grid.values.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple-kernel SVM with the (0,1) loss"};
  app.name(args.empty() ? "mklsvm" : args.front());
  app.require_subcommand(1);

  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate and split four-quadrant data");
  gen_cmd->add_option("--m", gen.m, "Total number of points")->required();
  gen_cmd->add_option("--margin", gen.margin, "Minimum distance to both axes")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--train-frac", gen.train_frac, "Training fraction")->capture_default_str();
  gen_cmd->add_option("--train-out", gen.train_out, "Training CSV")->required();
  gen_cmd->add_option("--test-out", gen.test_out, "Test CSV")->required();

  TrainFlags tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--train", tr.train, "Training CSV")->required();
  train_cmd->add_option("--c", tr.c, "Loss weight C")->required();
  train_cmd->add_option("--rho", tr.rho, "Penalty rho, used for rho1, rho2 and rho3")->required();
  train_cmd->add_option("--model-out", tr.model_out, "Model file")->required();
  train_cmd->add_option("--state-out", tr.state_out, "Solver state file for 'check'");
  add_solver_flags(train_cmd, tr.solver);

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "Report test accuracy and support size");
  eval_cmd->add_option("--model", ev.model, "Model file")->required();
  eval_cmd->add_option("--test", ev.test, "Labelled CSV")->required();

  PredictFlags pr;
  auto* predict_cmd = app.add_subcommand("predict", "Label points with a trained model");
  predict_cmd->add_option("--model", pr.model, "Model file")->required();
  predict_cmd->add_option("--input", pr.input, "CSV with header x1,...,xn[,y]")->required();
  predict_cmd->add_option("--out", pr.out, "Output CSV (default: stdout)");

  CvFlags cv;
  auto* cv_cmd = app.add_subcommand("cv", "Cross-validated grid search over (C, rho)");
  cv_cmd->add_option("--train", cv.train, "Training CSV")->required();
  cv_cmd->add_option("--c-grid", cv.c_grid, "Comma-separated C values")->delimiter(',');
  cv_cmd->add_option("--rho-grid", cv.rho_grid, "Comma-separated rho values")->delimiter(',');
  cv_cmd->add_option("--folds", cv.folds, "Number of folds")->capture_default_str();
  cv_cmd->add_option("--seed", cv.seed, "Fold assignment seed")->capture_default_str();
  cv_cmd->add_flag("--no-stratify", cv.no_stratify, "Assign folds ignoring labels");
  cv_cmd->add_option("--threads", cv.threads, "Worker threads (0: all cores)")->capture_default_str();
  cv_cmd->add_option("--table-out", cv.table_out, "CSV of every grid cell");
  add_solver_flags(cv_cmd, cv.solver);

  CheckFlags ck;
  auto* check_cmd = app.add_subcommand("check", "P-stationarity residuals of a solver state");
  check_cmd->add_option("--model", ck.model, "Model file")->required();
  check_cmd->add_option("--state", ck.state, "Solver state file")->required();
  check_cmd->add_option("--threshold", ck.threshold, "Largest accepted residual")->capture_default_str();
  check_cmd->add_option("--gamma", ck.gamma, "Prox parameter (default: 1/rho1)");

  BoundaryFlags bd;
  auto* boundary_cmd = app.add_subcommand("boundary", "Decision values on a regular 2-D grid");
  boundary_cmd->add_option("--model", bd.model, "Model file")->required();
  boundary_cmd->add_option("--x-range", bd.x_range, "lo,hi")->delimiter(',')->expected(2);
  boundary_cmd->add_option("--y-range", bd.y_range, "lo,hi")->delimiter(',')->expected(2);
  boundary_cmd->add_option("--resolution", bd.resolution, "Points per axis")->capture_default_str();
  boundary_cmd->add_option("--out", bd.out, "Grid CSV")->required();

  std::vector<const char*> argv;
  const std::string fallback = "mklsvm";
  argv.push_back(args.empty() ? fallback.c_str() : args.front().c_str());
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen, out);
    if (*train_cmd) return cmd_train(tr, out);
    if (*eval_cmd) return cmd_eval(ev, out);
    if (*predict_cmd) return cmd_predict(pr, out);
    if (*cv_cmd) return cmd_cv(cv, out);
    if (*check_cmd) return cmd_check(ck, out);
    if (*boundary_cmd) return cmd_boundary(bd, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace mklsvm::cli
