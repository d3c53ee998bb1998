#pragma once

#include <Eigen/Cholesky>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mklsvm/types.hpp"

namespace mklsvm {

struct Gaussian {
  double sigma;
};

struct HomogeneousPolynomial {
  int degree;
};

// A single kernel function. Construct through the factories, which validate
// the hyperparameter.
class KernelSpec {
 public:
  using Family = std::variant<Gaussian, HomogeneousPolynomial>;

  static KernelSpec gaussian(double sigma);
  static KernelSpec polynomial(int degree);

  const Family& family() const noexcept { return family_; }
  bool is_gaussian() const noexcept { return std::holds_alternative<Gaussian>(family_); }

  // "gaussian <sigma>" or "poly <degree>", the kernel-bank file syntax.
  std::string to_string() const;
  static KernelSpec parse(const std::string& line);

  friend bool operator==(const KernelSpec& a, const KernelSpec& b);

 private:
  explicit KernelSpec(Family f) : family_(f) {}
  Family family_;
};

// Ordered, nonempty list of kernels. The position of a kernel is its index
// throughout training.
class KernelBank {
 public:
  explicit KernelBank(std::vector<KernelSpec> specs);

  std::size_t size() const noexcept { return specs_.size(); }
  const KernelSpec& operator[](std::size_t l) const { return specs_[l]; }
  const std::vector<KernelSpec>& specs() const noexcept { return specs_; }
  auto begin() const { return specs_.begin(); }
  auto end() const { return specs_.end(); }

  // Ten Gaussians used for the four-quadrant experiment.
  static KernelBank reference_gaussians();

 private:
  std::vector<KernelSpec> specs_;
};

// One spec per line; blank lines and lines starting with '#' are skipped.
KernelBank read_kernel_bank(const std::filesystem::path& path);
void write_kernel_bank(const KernelBank& bank, const std::filesystem::path& path);

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

// Dense Gram matrices for a fixed point set, each with its Cholesky factor.
// Immutable once built.
class GramStack {
 public:
  // Throws NotPositiveDefinite naming the first kernel whose matrix fails to
  // factorize.
  static GramStack build(const KernelBank& bank, const PointMatrix& points, double jitter = 0.0);

  std::size_t kernels() const noexcept { return mats_.size(); }
  Index samples() const noexcept { return m_; }
  const Matrix& matrix(std::size_t l) const { return mats_.at(l); }
  const Eigen::LLT<Matrix>& cholesky(std::size_t l) const { return chol_.at(l); }

  // v^T K_l^{-1} v through the cached factor, clamped at zero.
  double quad_form_inv(std::size_t l, const Eigen::Ref<const Vector>& v) const;

 private:
  GramStack() = default;
  Index m_ = 0;
  std::vector<Matrix> mats_;
  std::vector<Eigen::LLT<Matrix>> chol_;
};

// Smallest eigenvalue of sum_l d_l K_l. Diagnostic only.
double combined_min_eigenvalue(const GramStack& gram, const Eigen::Ref<const Vector>& d);

}  // namespace mklsvm
