#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "mklsvm/data.hpp"
#include "mklsvm/kernel.hpp"
#include "mklsvm/types.hpp"

namespace mklsvm {

// Exported classifier. Everything needed for prediction without the Gram
// stack: the decision function is
//   f(x) = -sum_l d_l sum_{i in support} lambda_i y_i k_l(x, x_i) + b.
struct TrainedModel {
  PointMatrix anchors;
  Vector anchor_labels;
  Vector lambda_star;
  Vector d_star;
  double b_star = 0.0;
  KernelBank bank;
  IndexSet support_idx;
  // Training settings kept for diagnostics and for rebuilding the Gram stack.
  double c = 1.0;
  double rho1 = 1.0;
  double jitter = 0.0;

  Index dim() const noexcept { return anchors.cols(); }
  // Kernels whose weight exceeds `cutoff`.
  IndexSet active_kernels(double cutoff = 1e-4) const;
};

struct EvalMetrics {
  double tacc = 0.0;
  Index nsv = 0;
};

double decision_value(const TrainedModel& model, std::span<const double> x);

// sign(decision_value) with sign(0) = +1.
int predict(const TrainedModel& model, std::span<const double> x);

EvalMetrics evaluate(const TrainedModel& model, const Dataset& test);

// Decision values on a regular grid over [x_lo, x_hi] x [y_lo, y_hi]:
// values(i, j) belongs to (xs(i), ys(j)). Two-dimensional models only.
struct BoundaryGrid {
  Vector xs;
  Vector ys;
  Matrix values;
};
BoundaryGrid boundary_grid(const TrainedModel& model, std::pair<double, double> x_range,
                           std::pair<double, double> y_range, Index resolution);
void write_grid_csv(const BoundaryGrid& grid, const std::filesystem::path& path);

// Versioned text model file.
void write_model(const TrainedModel& model, std::ostream& os);
TrainedModel read_model(std::istream& is);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace mklsvm
