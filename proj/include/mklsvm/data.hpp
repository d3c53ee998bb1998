#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "mklsvm/types.hpp"

namespace mklsvm {

// Labelled samples: one point per row of `points`, labels in {-1, +1}.
struct Dataset {
  PointMatrix points;
  Vector labels;

  Index size() const noexcept { return points.rows(); }
  Index dim() const noexcept { return points.cols(); }

  // Throws InvalidArgument on empty data, size mismatch, or a label outside {-1, +1}.
  void validate() const;
  Dataset subset(const IndexSet& idx) const;
};

// Throws InvalidArgument if any entry is not exactly -1 or +1.
void validate_labels(const Eigen::Ref<const Vector>& labels);

// Uniform samples on [-1, 1]^2 at least `margin` away from both axes,
// labelled +1 in the first and third quadrants and -1 otherwise.
Dataset gen_quadrant_data(Index m, double margin, std::uint64_t seed);

// Shuffled split with floor(m * train_fraction) training rows.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

// CSV with header x1,...,xn,y. Values are written with 17 significant digits.
Dataset read_csv(const std::filesystem::path& path);
// Points only: header x1,...,xn with an optional trailing y column, which is
// validated and then ignored.
PointMatrix read_points_csv(const std::filesystem::path& path);
void write_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace mklsvm
