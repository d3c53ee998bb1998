#include "mklsvm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"

namespace mklsvm {

void validate_labels(const Eigen::Ref<const Vector>& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 1.0 && labels(i) != -1.0)
      throw InvalidArgument("label at row " + std::to_string(i + 1) + " is not -1 or +1");
  }
}

void Dataset::validate() const {
  if (points.rows() < 1 || points.cols() < 1) throw InvalidArgument("dataset is empty");
  if (labels.size() != points.rows()) throw InvalidArgument("point and label counts differ");
  validate_labels(labels);
}

Dataset Dataset::subset(const IndexSet& idx) const {
  Dataset out;
  out.points.resize(static_cast<Index>(idx.size()), points.cols());
  out.labels.resize(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.points.row(static_cast<Index>(k)) = points.row(idx[k]);
    out.labels(static_cast<Index>(k)) = labels(idx[k]);
  }
  return out;
}

Dataset gen_quadrant_data(Index m, double margin, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("sample count must be at least 1");
  if (!(margin >= 0.0 && margin < 0.5)) throw InvalidArgument("margin must lie in [0, 0.5)");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Dataset data;
  data.points.resize(m, 2);
  data.labels.resize(m);
  for (Index i = 0; i < m;) {
    const double x1 = coord(rng);
    const double x2 = coord(rng);
    if (std::abs(x1) < margin || std::abs(x2) < margin || x1 * x2 == 0.0) continue;
    data.points(i, 0) = x1;
    data.points(i, 1) = x2;
    data.labels(i) = x1 * x2 > 0.0 ? 1.0 : -1.0;
    ++i;
  }
  return data;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidArgument("train fraction must lie in (0, 1)");
  const Index m = data.size();
  const auto n_train = static_cast<Index>(std::floor(static_cast<double>(m) * train_fraction));
  if (n_train < 1 || n_train >= m) throw InvalidArgument("split leaves one side empty");

  IndexSet order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const IndexSet train(order.begin(), order.begin() + n_train);
  const IndexSet test(order.begin() + n_train, order.end());
  return {data.subset(train), data.subset(test)};
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, std::size_t line) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw FormatError("malformed number '" + s + "'", line);
  return v;
}

}  // namespace

namespace {

// Header x1,...,xn with an optional trailing y, mandatory when `require_y`.
struct Table {
  std::vector<double> coords;
  std::vector<double> labels;
  std::size_t n = 0;
  bool has_y = false;
};

Table read_table(const std::filesystem::path& path, bool require_y) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const char* expected = require_y ? "header must be x1,...,xn,y" : "header must be x1,...,xn[,y]";

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw FormatError("empty dataset file " + path.string());

  Table t;
  const auto header = split_fields(trim(line));
  t.has_y = trim(header.back()) == "y";
  if (require_y && !t.has_y) throw FormatError(expected, lineno);
  t.n = header.size() - (t.has_y ? 1 : 0);
  if (t.n == 0) throw FormatError(expected, lineno);
  for (std::size_t k = 0; k < t.n; ++k) {
    if (trim(header[k]) != "x" + std::to_string(k + 1)) throw FormatError(expected, lineno);
  }
  const std::size_t width = t.n + (t.has_y ? 1 : 0);

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(trim(line));
    if (fields.size() != width)
      throw FormatError("expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()),
                        lineno);
    for (std::size_t k = 0; k < t.n; ++k) t.coords.push_back(parse_double(fields[k], lineno));
    if (t.has_y) {
      const double y = parse_double(fields[t.n], lineno);
      if (y != 1.0 && y != -1.0) throw FormatError("label must be -1 or +1", lineno);
      t.labels.push_back(y);
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("dataset has no rows: " + path.string());
  return t;
}

}  // namespace

Dataset read_csv(const std::filesystem::path& path) {
  const Table t = read_table(path, true);
  Dataset data;
  const auto m = static_cast<Index>(t.labels.size());
  data.points = Eigen::Map<const PointMatrix>(t.coords.data(), m, static_cast<Index>(t.n));
  data.labels = Eigen::Map<const Vector>(t.labels.data(), m);
  return data;
}

PointMatrix read_points_csv(const std::filesystem::path& path) {
  const Table t = read_table(path, false);
  const auto n = static_cast<Index>(t.n);
  return Eigen::Map<const PointMatrix>(t.coords.data(), static_cast<Index>(t.coords.size()) / n, n);
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  data.validate();
  write_atomically(path, [&](std::ostream& os) {
    os << std::setprecision(17);
    for (Index k = 0; k < data.dim(); ++k) os << 'x' << k + 1 << ',';
    os << "y\n";
    for (Index i = 0; i < data.size(); ++i) {
      for (Index k = 0; k < data.dim(); ++k) os << data.points(i, k) << ',';
      os << static_cast<int>(data.labels(i)) << '\n';
    }
  });
}

}  // namespace mklsvm
