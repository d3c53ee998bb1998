#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "helpers.hpp"
#include "mklsvm/error.hpp"
#include "mklsvm/tuning.hpp"

using namespace mklsvm;

namespace {

void check_partition(const std::vector<Fold>& folds, Index m) {
  std::set<Index> seen;
  std::size_t lo = static_cast<std::size_t>(m), hi = 0;
  for (const auto& f : folds) {
    lo = std::min(lo, f.validation.size());
    hi = std::max(hi, f.validation.size());
    CHECK(f.train.size() + f.validation.size() == static_cast<std::size_t>(m));
    for (Index i : f.validation) CHECK(seen.insert(i).second);
    std::set<Index> train(f.train.begin(), f.train.end());
    for (Index i : f.validation) CHECK(train.count(i) == 0);
  }
  CHECK(seen.size() == static_cast<std::size_t>(m));
  CHECK(hi - lo <= 1);
}

}  // namespace

TEST_SUITE("tuning") {

TEST_CASE("default grids") {
  const auto c = default_c_grid();
  const auto rho = default_rho_grid();
  REQUIRE(c.size() == 10);
  REQUIRE(rho.size() == 10);
  for (int k = 0; k < 10; ++k) {
    CHECK(c[static_cast<std::size_t>(k)] == std::pow(2.0, k - 2));
    CHECK(rho[static_cast<std::size_t>(k)] == doctest::Approx(std::pow(std::sqrt(2.0), k - 2)).epsilon(1e-15));
  }
  CHECK(rho[6] == 4.0);
  CHECK(c[6] == 16.0);
}

TEST_CASE("fold partitions") {
  auto singles = kfold_split(10, 10, 1);
  REQUIRE(singles.size() == 10);
  for (const auto& f : singles) CHECK(f.validation.size() == 1);
  check_partition(singles, 10);

  const auto tens = kfold_split(100, 10, 3);
  for (const auto& f : tens) CHECK(f.validation.size() == 10);
  check_partition(tens, 100);
  check_partition(kfold_split(23, 4, 5), 23);

  CHECK_THROWS_AS(kfold_split(100, 101, 1), InvalidArgument);
  CHECK_THROWS_AS(kfold_split(10, 1, 1), InvalidArgument);
}

TEST_CASE("folds are deterministic in the seed") {
  const auto a = kfold_split(30, 3, 7);
  const auto b = kfold_split(30, 3, 7);
  const auto c = kfold_split(30, 3, 8);
  for (std::size_t k = 0; k < 3; ++k) CHECK(a[k].validation == b[k].validation);
  bool differs = false;
  for (std::size_t k = 0; k < 3; ++k) differs = differs || a[k].validation != c[k].validation;
  CHECK(differs);
}

TEST_CASE("stratified folds keep the class balance") {
  Vector y(40);
  for (Index i = 0; i < 40; ++i) y(i) = i < 30 ? 1.0 : -1.0;
  const auto folds = kfold_split(y, 10, 2, true);
  check_partition(folds, 40);
  for (const auto& f : folds) {
    int pos = 0;
    for (Index i : f.validation) pos += y(i) > 0 ? 1 : 0;
    CHECK(pos == 3);
  }
  check_partition(kfold_split(y, 10, 2, false), 40);
}

TEST_CASE("grid validation") {
  GridSpec g;
  CHECK_NOTHROW(g.validate());
  g.c_grid.clear();
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = GridSpec{};
  g.rho_grid = {1.0, -1.0};
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = GridSpec{};
  g.folds = 1;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
}

TEST_CASE("grid search picks the table maximum with the documented tie-break") {
  const Dataset d = gen_quadrant_data(40, 0.05, 5);
  const KernelBank bank({KernelSpec::gaussian(0.2), KernelSpec::gaussian(0.4)});
  GridSpec g;
  g.c_grid = {0.25, 4.0, 16.0};
  g.rho_grid = {1.0, 4.0};
  g.folds = 4;
  g.seed = 3;
  Hyperparams base;
  base.max_iter = 300;
  const CvResult r = grid_search_cv(d, bank, g, base, {}, 1);
  REQUIRE(r.table.size() == 6);
  double best = 0.0;
  for (const auto& cell : r.table) {
    CHECK(cell.mean_tacc >= 0.0);
    CHECK(cell.mean_tacc <= 1.0);
    CHECK(cell.failures == 0);
    best = std::max(best, cell.mean_tacc);
  }
  CHECK(r.best_score == best);
  for (const auto& cell : r.table) {
    if (cell.mean_tacc != best) continue;
    CHECK(r.best_c <= cell.c);
    if (cell.c == r.best_c) CHECK(r.best_rho <= cell.rho);
  }
  CHECK(r.table[0].c == 0.25);
  CHECK(r.table[1].rho == 4.0);

  const CvResult again = grid_search_cv(d, bank, g, base, {}, 3);
  CHECK(again.best_c == r.best_c);
  CHECK(again.best_rho == r.best_rho);
  for (std::size_t k = 0; k < r.table.size(); ++k) {
    CHECK(again.table[k].mean_tacc == r.table[k].mean_tacc);
    CHECK(again.table[k].std_tacc == r.table[k].std_tacc);
  }
}

TEST_CASE("single cell and duplicated cells") {
  const Dataset d = gen_quadrant_data(20, 0.05, 6);
  const KernelBank bank({KernelSpec::gaussian(0.3)});
  Hyperparams base;
  base.max_iter = 200;
  GridSpec one;
  one.c_grid = {2.0};
  one.rho_grid = {1.0};
  one.folds = 5;
  const CvResult a = grid_search_cv(d, bank, one, base, {}, 1);
  CHECK(a.best_c == 2.0);
  CHECK(a.best_rho == 1.0);

  GridSpec dup = one;
  dup.c_grid = {2.0, 2.0};
  const CvResult b = grid_search_cv(d, bank, dup, base, {}, 1);
  CHECK(b.table[0].mean_tacc == b.table[1].mean_tacc);
  CHECK(b.best_score == a.best_score);
}

TEST_CASE("failing folds are scored zero") {
  Dataset d = gen_quadrant_data(10, 0.05, 2);
  // Six copies of one point: some training half must hold at least two.
  for (int i = 1; i < 6; ++i) {
    d.points.row(i) = d.points.row(0);
    d.labels(i) = d.labels(0);
  }
  GridSpec g;
  g.c_grid = {1.0};
  g.rho_grid = {1.0};
  g.folds = 2;
  const CvResult r = grid_search_cv(d, KernelBank({KernelSpec::gaussian(0.3)}), g, Hyperparams{}, {}, 1);
  REQUIRE(r.table.size() == 1);
  CHECK(r.table[0].failures >= 1);
  CHECK(r.table[0].failures <= 2);
}

TEST_CASE("cv table csv") {
  testing::TempDir dir("tuning");
  CvResult r;
  r.table = {{0.25, 1.0, 0.5, 0.1, 0}, {1.0, 2.0, 0.75, 0.0, 2}};
  write_cv_table(r, dir / "cv.csv");
  std::ifstream in(dir / "cv.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "C,rho,mean_tacc,std_tacc,failures");
  std::getline(in, line);
  CHECK(line == "0.25,1,0.5,0.10000000000000001,0");
  std::getline(in, line);
  CHECK(line == "1,2,0.75,0,2");
}

}
