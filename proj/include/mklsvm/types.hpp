#pragma once

#include <Eigen/Core>
#include <vector>

namespace mklsvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One sample per row, contiguous so rows can be viewed as spans.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

}  // namespace mklsvm
