#include "mklsvm/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"

namespace mklsvm {

KernelSpec KernelSpec::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("gaussian kernel requires sigma > 0");
  return KernelSpec(Gaussian{sigma});
}

KernelSpec KernelSpec::polynomial(int degree) {
  if (degree < 1) throw InvalidArgument("polynomial kernel requires degree >= 1");
  return KernelSpec(HomogeneousPolynomial{degree});
}

std::string KernelSpec::to_string() const {
  std::ostringstream os;
  if (const auto* g = std::get_if<Gaussian>(&family_)) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), g->sigma);
    os << "gaussian " << std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  } else {
    os << "poly " << std::get<HomogeneousPolynomial>(family_).degree;
  }
  return os.str();
}

KernelSpec KernelSpec::parse(const std::string& line) {
  std::istringstream is(line);
  std::string kind;
  is >> kind;
  if (kind == "gaussian") {
    double sigma;
    if (!(is >> sigma)) throw FormatError("gaussian kernel needs a sigma value");
    std::string rest;
    if (is >> rest) throw FormatError("unexpected token '" + rest + "' after kernel spec");
    return gaussian(sigma);
  }
  if (kind == "poly") {
    double degree;
    if (!(is >> degree) || degree != std::floor(degree))
      throw FormatError("poly kernel needs an integer degree");
    std::string rest;
    if (is >> rest) throw FormatError("unexpected token '" + rest + "' after kernel spec");
    return polynomial(static_cast<int>(degree));
  }
  throw FormatError("unknown kernel family '" + kind + "'");
}

bool operator==(const KernelSpec& a, const KernelSpec& b) {
  if (a.family_.index() != b.family_.index()) return false;
  if (const auto* g = std::get_if<Gaussian>(&a.family_))
    return g->sigma == std::get<Gaussian>(b.family_).sigma;
  return std::get<HomogeneousPolynomial>(a.family_).degree ==
         std::get<HomogeneousPolynomial>(b.family_).degree;
}

KernelBank::KernelBank(std::vector<KernelSpec> specs) : specs_(std::move(specs)) {
  if (specs_.empty()) throw InvalidArgument("kernel bank must hold at least one kernel");
}

KernelBank KernelBank::reference_gaussians() {
  std::vector<KernelSpec> specs;
  for (double s : {0.1400, 0.0995, 0.0161, 0.0409, 0.1561, 0.0156, 0.1221, 0.1175, 0.0539, 0.1247})
    specs.push_back(KernelSpec::gaussian(s));
  return KernelBank(std::move(specs));
}

KernelBank read_kernel_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open kernel file " + path.string());
  std::vector<KernelSpec> specs;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      specs.push_back(KernelSpec::parse(line));
    } catch (const Error& e) {
      throw FormatError(e.what(), no);
    }
  }
  if (specs.empty()) throw FormatError("kernel file " + path.string() + " lists no kernels");
  return KernelBank(std::move(specs));
}

void write_kernel_bank(const KernelBank& bank, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& os) {
    for (const auto& spec : bank) os << spec.to_string() << '\n';
  });
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    throw InvalidArgument("kernel arguments must have the same nonzero dimension");
  if (const auto* g = std::get_if<Gaussian>(&spec.family())) {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double diff = x[k] - y[k];
      sq += diff * diff;
    }
    return std::exp(-sq / (2.0 * g->sigma * g->sigma));
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
  return std::pow(dot, std::get<HomogeneousPolynomial>(spec.family()).degree);
}

GramStack GramStack::build(const KernelBank& bank, const PointMatrix& points, double jitter) {
  if (points.rows() < 1 || points.cols() < 1) throw InvalidArgument("gram construction needs at least one point");
  if (!(jitter >= 0.0)) throw InvalidArgument("jitter must be nonnegative");

  const Index m = points.rows();
  const auto n = static_cast<std::size_t>(points.cols());
  auto row = [&](Index i) { return std::span<const double>(points.row(i).data(), n); };

  GramStack stack;
  stack.m_ = m;
  stack.mats_.reserve(bank.size());
  stack.chol_.reserve(bank.size());
  for (std::size_t l = 0; l < bank.size(); ++l) {
    Matrix k(m, m);
    for (Index i = 0; i < m; ++i) {
      k(i, i) = eval_kernel(bank[l], row(i), row(i)) + jitter;
      for (Index j = 0; j < i; ++j) {
        const double v = eval_kernel(bank[l], row(i), row(j));
        k(i, j) = v;
        k(j, i) = v;
      }
    }
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite(l);
    // LLT accepts tiny positive pivots; a singular matrix can slip through
    // with a zero or denormal pivot, so reject those too.
    const Vector diag = llt.matrixLLT().diagonal();
    if (!(diag.minCoeff() > 1e-150) || !diag.allFinite()) throw NotPositiveDefinite(l);
    stack.mats_.push_back(std::move(k));
    stack.chol_.push_back(std::move(llt));
  }
  return stack;
}

double GramStack::quad_form_inv(std::size_t l, const Eigen::Ref<const Vector>& v) const {
  if (l >= mats_.size()) throw InvalidArgument("kernel index out of range");
  if (v.size() != m_) throw InvalidArgument("vector length does not match gram size");
  // ||L^{-1} v||^2 with K = L L^T
  const Vector w = chol_[l].matrixL().solve(v);
  return std::max(0.0, w.squaredNorm());
}

double combined_min_eigenvalue(const GramStack& gram, const Eigen::Ref<const Vector>& d) {
  if (static_cast<std::size_t>(d.size()) != gram.kernels())
    throw InvalidArgument("weight vector length does not match kernel count");
  Matrix sum = Matrix::Zero(gram.samples(), gram.samples());
  for (std::size_t l = 0; l < gram.kernels(); ++l) sum += d(static_cast<Index>(l)) * gram.matrix(l);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace mklsvm
