#include <doctest.h>

#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "mklsvm/data.hpp"
#include "mklsvm/error.hpp"

using namespace mklsvm;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

std::size_t format_error_line(const std::filesystem::path& p) {
  try {
    read_csv(p);
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("generated points follow the quadrant rule") {
  const Dataset d = gen_quadrant_data(500, 0.05, 3);
  REQUIRE(d.size() == 500);
  REQUIRE(d.dim() == 2);
  for (Index i = 0; i < d.size(); ++i) {
    const double x1 = d.points(i, 0), x2 = d.points(i, 1);
    CHECK(std::abs(x1) >= 0.05);
    CHECK(std::abs(x2) >= 0.05);
    CHECK(std::abs(x1) <= 1.0);
    CHECK(std::abs(x2) <= 1.0);
    CHECK(x1 * x2 != 0.0);
    CHECK(d.labels(i) == (x1 * x2 > 0.0 ? 1.0 : -1.0));
  }
}

TEST_CASE("generation is a function of the seed") {
  const Dataset a = gen_quadrant_data(50, 0.1, 7);
  const Dataset b = gen_quadrant_data(50, 0.1, 7);
  const Dataset c = gen_quadrant_data(50, 0.1, 8);
  CHECK(a.points == b.points);
  CHECK(a.labels == b.labels);
  CHECK(a.points != c.points);
}

TEST_CASE("generation arguments are validated") {
  CHECK_THROWS_AS(gen_quadrant_data(0, 0.05, 1), InvalidArgument);
  CHECK_THROWS_AS(gen_quadrant_data(10, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(gen_quadrant_data(10, -0.1, 1), InvalidArgument);
}

TEST_CASE("split sizes") {
  const Dataset d = gen_quadrant_data(200, 0.05, 1);
  auto [tr, te] = split(d, 0.5, 1);
  CHECK(tr.size() == 100);
  CHECK(te.size() == 100);

  auto [a, b] = split(gen_quadrant_data(3, 0.05, 1), 0.5, 2);
  CHECK(a.size() == 1);
  CHECK(b.size() == 2);

  CHECK_THROWS_AS(split(gen_quadrant_data(1, 0.05, 1), 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS(split(d, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(split(d, 1.0, 1), InvalidArgument);
}

TEST_CASE("split is deterministic and partitions the rows") {
  const Dataset d = gen_quadrant_data(40, 0.05, 2);
  auto [a1, b1] = split(d, 0.3, 9);
  auto [a2, b2] = split(d, 0.3, 9);
  CHECK(a1.points == a2.points);
  CHECK(b1.labels == b2.labels);
  // every row lands on exactly one side
  double sum = 0.0;
  for (Index i = 0; i < d.size(); ++i) sum += d.points(i, 0);
  CHECK(a1.points.col(0).sum() + b1.points.col(0).sum() == doctest::Approx(sum));
}

TEST_CASE("csv round trip is exact") {
  testing::TempDir dir("data");
  const Dataset d = gen_quadrant_data(25, 0.05, 6);
  write_csv(d, dir / "d.csv");
  const Dataset back = read_csv(dir / "d.csv");
  CHECK(back.points == d.points);
  CHECK(back.labels == d.labels);
  CHECK(read_points_csv(dir / "d.csv") == d.points);
}

TEST_CASE("csv errors carry line numbers") {
  testing::TempDir dir("data");
  write_text(dir / "label.csv", "x1,x2,y\n0.1,0.2,1\n0.5,0.5,2\n");
  CHECK(format_error_line(dir / "label.csv") == 3);
  write_text(dir / "fields.csv", "x1,x2,y\n0.1,0.2\n");
  CHECK(format_error_line(dir / "fields.csv") == 2);
  write_text(dir / "number.csv", "x1,x2,y\n0.1,abc,1\n");
  CHECK(format_error_line(dir / "number.csv") == 2);
  write_text(dir / "header.csv", "a,b,y\n0.1,0.2,1\n");
  CHECK(format_error_line(dir / "header.csv") == 1);
  write_text(dir / "nan.csv", "x1,y\nnan,1\n");
  CHECK(format_error_line(dir / "nan.csv") == 2);

  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(read_csv(dir / "empty.csv"), FormatError);
  write_text(dir / "rowless.csv", "x1,x2,y\n");
  CHECK_THROWS_AS(read_csv(dir / "rowless.csv"), FormatError);
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), Error);
}

TEST_CASE("points without labels") {
  testing::TempDir dir("data");
  write_text(dir / "p.csv", "x1,x2\n0.5,-0.25\n1,2\n");
  const PointMatrix p = read_points_csv(dir / "p.csv");
  REQUIRE(p.rows() == 2);
  CHECK(p(0, 1) == -0.25);
  CHECK(p(1, 0) == 1.0);
  CHECK_THROWS_AS(read_csv(dir / "p.csv"), FormatError);
}

TEST_CASE("dataset validation") {
  Dataset d = testing::four_points();
  CHECK_NOTHROW(d.validate());
  d.labels(0) = 0.0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  CHECK_THROWS_AS(Dataset{}.validate(), InvalidArgument);

  const Dataset s = testing::four_points().subset({0, 2});
  CHECK(s.size() == 2);
  CHECK(s.points(1, 0) == -0.5);
}

}
