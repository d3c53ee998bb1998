#include "mklsvm/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"

namespace mklsvm {

namespace {
constexpr const char* kModelMagic = "mklsvm-model";
constexpr int kModelVersion = 1;
}  // namespace

IndexSet TrainedModel::active_kernels(double cutoff) const {
  IndexSet out;
  for (Index l = 0; l < d_star.size(); ++l)
    if (d_star(l) > cutoff) out.push_back(l);
  return out;
}

double decision_value(const TrainedModel& model, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != model.dim())
    throw InvalidArgument("point dimension " + std::to_string(x.size()) +
                          " does not match model dimension " + std::to_string(model.dim()));
  const auto n = static_cast<std::size_t>(model.dim());
  double f = 0.0;
  for (std::size_t l = 0; l < model.bank.size(); ++l) {
    const double dl = model.d_star(static_cast<Index>(l));
    if (dl == 0.0) continue;
    double inner = 0.0;
    for (Index i : model.support_idx) {
      const std::span<const double> xi(model.anchors.row(i).data(), n);
      inner += model.lambda_star(i) * model.anchor_labels(i) * eval_kernel(model.bank[l], x, xi);
    }
    f -= dl * inner;
  }
  return f + model.b_star;
}

int predict(const TrainedModel& model, std::span<const double> x) {
  return decision_value(model, x) >= 0.0 ? 1 : -1;
}

EvalMetrics evaluate(const TrainedModel& model, const Dataset& test) {
  if (test.size() < 1) throw InvalidArgument("test set is empty");
  test.validate();
  if (test.dim() != model.dim())
    throw InvalidArgument("test data dimension " + std::to_string(test.dim()) +
                          " does not match model dimension " + std::to_string(model.dim()));
  const auto n = static_cast<std::size_t>(test.dim());
  double err = 0.0;
  for (Index j = 0; j < test.size(); ++j) {
    const int yhat = predict(model, std::span<const double>(test.points.row(j).data(), n));
    err += std::abs(yhat - test.labels(j));
  }
  return EvalMetrics{1.0 - err / (2.0 * static_cast<double>(test.size())),
                     static_cast<Index>(model.support_idx.size())};
}

BoundaryGrid boundary_grid(const TrainedModel& model, std::pair<double, double> x_range,
                           std::pair<double, double> y_range, Index resolution) {
  if (model.dim() != 2) throw InvalidArgument("boundary export requires n=2");
  if (resolution < 2) throw InvalidArgument("grid resolution must be at least 2");
  if (!(x_range.first < x_range.second) || !(y_range.first < y_range.second))
    throw InvalidArgument("grid ranges must be increasing");
  BoundaryGrid g;
  g.xs = Vector::LinSpaced(resolution, x_range.first, x_range.second);
  g.ys = Vector::LinSpaced(resolution, y_range.first, y_range.second);
  g.values.resize(resolution, resolution);
  for (Index i = 0; i < resolution; ++i) {
    for (Index j = 0; j < resolution; ++j) {
      const double p[2] = {g.xs(i), g.ys(j)};
      g.values(i, j) = decision_value(model, p);
    }
  }
  return g;
}

void write_grid_csv(const BoundaryGrid& grid, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& os) {
    os << std::setprecision(17) << "x1,x2,value\n";
    for (Index i = 0; i < grid.xs.size(); ++i)
      for (Index j = 0; j < grid.ys.size(); ++j)
        os << grid.xs(i) << ',' << grid.ys(j) << ',' << grid.values(i, j) << '\n';
  });
}

void write_model(const TrainedModel& model, std::ostream& os) {
  const Index m = model.anchors.rows();
  const Index n = model.anchors.cols();
  os << std::setprecision(17);
  os << kModelMagic << ' ' << kModelVersion << '\n';
  os << "kernels " << model.bank.size() << '\n';
  for (const auto& spec : model.bank) os << spec.to_string() << '\n';
  os << "samples " << m << ' ' << n << '\n';
  os << "c " << model.c << '\n';
  os << "rho1 " << model.rho1 << '\n';
  os << "jitter " << model.jitter << '\n';
  os << "b " << model.b_star << '\n';
  os << "d";
  for (Index l = 0; l < model.d_star.size(); ++l) os << ' ' << model.d_star(l);
  os << '\n';
  // x_1 ... x_n y lambda
  os << "anchors\n";
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < n; ++k) os << model.anchors(i, k) << ' ';
    os << static_cast<int>(model.anchor_labels(i)) << ' ' << model.lambda_star(i) << '\n';
  }
  os << "support " << model.support_idx.size();
  for (Index i : model.support_idx) os << ' ' << i;
  os << "\nend\n";
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next nonblank line split into a stream; throws at end of input.
  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw FormatError(std::string("unexpected end of model file, expected ") + expecting, line_);
  }

  std::istringstream keyword(const std::string& kw) {
    auto ls = next(kw.c_str());
    std::string got;
    ls >> got;
    if (got != kw) fail("expected '" + kw + "', got '" + got + "'");
    return ls;
  }

  template <typename T>
  T value(std::istringstream& ls, const char* what) {
    T v;
    if (!(ls >> v)) fail(std::string("cannot read ") + what);
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw FormatError(msg, line_); }
  std::size_t line() const { return line_; }

 private:
  std::istream& is_;
  std::size_t line_ = 0;
};

}  // namespace

TrainedModel read_model(std::istream& is) {
  LineReader in(is);
  {
    auto ls = in.keyword(kModelMagic);
    if (in.value<int>(ls, "version") != kModelVersion) in.fail("unsupported model version");
  }
  auto ls = in.keyword("kernels");
  const auto L = in.value<std::size_t>(ls, "kernel count");
  if (L < 1) in.fail("model needs at least one kernel");
  std::vector<KernelSpec> specs;
  for (std::size_t l = 0; l < L; ++l) {
    std::string text;
    std::getline(in.next("kernel spec"), text);
    try {
      specs.push_back(KernelSpec::parse(text));
    } catch (const Error& e) {
      in.fail(e.what());
    }
  }

  ls = in.keyword("samples");
  const auto m = in.value<Index>(ls, "sample count");
  const auto n = in.value<Index>(ls, "dimension");
  if (m < 1 || n < 1) in.fail("sample count and dimension must be positive");

  TrainedModel model{.anchors = PointMatrix(m, n),
                     .anchor_labels = Vector(m),
                     .lambda_star = Vector(m),
                     .d_star = Vector(static_cast<Index>(L)),
                     .b_star = 0.0,
                     .bank = KernelBank(std::move(specs)),
                     .support_idx = {}};
  ls = in.keyword("c");
  model.c = in.value<double>(ls, "C");
  ls = in.keyword("rho1");
  model.rho1 = in.value<double>(ls, "rho1");
  ls = in.keyword("jitter");
  model.jitter = in.value<double>(ls, "jitter");
  ls = in.keyword("b");
  model.b_star = in.value<double>(ls, "intercept");
  ls = in.keyword("d");
  for (Index l = 0; l < model.d_star.size(); ++l) model.d_star(l) = in.value<double>(ls, "kernel weight");

  in.keyword("anchors");
  for (Index i = 0; i < m; ++i) {
    auto row = in.next("anchor row");
    for (Index k = 0; k < n; ++k) model.anchors(i, k) = in.value<double>(row, "anchor coordinate");
    const double y = in.value<double>(row, "anchor label");
    if (y != 1.0 && y != -1.0) in.fail("anchor label must be -1 or +1");
    model.anchor_labels(i) = y;
    model.lambda_star(i) = in.value<double>(row, "multiplier");
  }

  ls = in.keyword("support");
  const auto k = in.value<std::size_t>(ls, "support size");
  for (std::size_t s = 0; s < k; ++s) {
    const auto idx = in.value<Index>(ls, "support index");
    if (idx < 0 || idx >= m) in.fail("support index out of range");
    model.support_idx.push_back(idx);
  }
  in.keyword("end");
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& os) { write_model(model, os); });
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace mklsvm
