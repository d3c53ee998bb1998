#include "mklsvm/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

#include "mklsvm/error.hpp"
#include "mklsvm/io.hpp"

namespace mklsvm {

std::vector<double> default_c_grid() {
  std::vector<double> g;
  for (int e = -2; e <= 7; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

std::vector<double> default_rho_grid() {
  std::vector<double> g;
  // a^e with a = sqrt(2): exact powers of two for even e
  for (int e = -2; e <= 7; ++e)
    g.push_back(e % 2 == 0 ? std::ldexp(1.0, e / 2) : std::ldexp(std::sqrt(2.0), (e - 1) / 2));
  return g;
}

void GridSpec::validate() const {
  if (c_grid.empty() || rho_grid.empty()) throw InvalidArgument("parameter grids must be nonempty");
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  for (double c : c_grid)
    if (!(c > 0.0)) throw InvalidArgument("C grid values must be positive");
  for (double r : rho_grid)
    if (!(r > 0.0)) throw InvalidArgument("rho grid values must be positive");
}

namespace {

std::vector<Fold> deal(const IndexSet& order, Index m, int folds) {
  std::vector<IndexSet> val(static_cast<std::size_t>(folds));
  for (std::size_t k = 0; k < order.size(); ++k) val[k % val.size()].push_back(order[k]);

  std::vector<Fold> out;
  for (auto& v : val) {
    std::sort(v.begin(), v.end());
    Fold f;
    f.validation = v;
    std::vector<bool> in_val(static_cast<std::size_t>(m), false);
    for (Index i : v) in_val[static_cast<std::size_t>(i)] = true;
    for (Index i = 0; i < m; ++i)
      if (!in_val[static_cast<std::size_t>(i)]) f.train.push_back(i);
    out.push_back(std::move(f));
  }
  return out;
}

void check_folds(Index m, int folds) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (folds > m)
    throw InvalidArgument("cannot split " + std::to_string(m) + " samples into " +
                          std::to_string(folds) + " folds");
}

}  // namespace

std::vector<Fold> kfold_split(Index m, int folds, std::uint64_t seed) {
  check_folds(m, folds);
  IndexSet order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return deal(order, m, folds);
}

std::vector<Fold> kfold_split(const Eigen::Ref<const Vector>& labels, int folds,
                              std::uint64_t seed, bool stratify) {
  if (!stratify) return kfold_split(labels.size(), folds, seed);
  const Index m = labels.size();
  check_folds(m, folds);
  IndexSet pos, neg;
  for (Index i = 0; i < m; ++i) (labels(i) > 0.0 ? pos : neg).push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  IndexSet order = pos;
  order.insert(order.end(), neg.begin(), neg.end());
  return deal(order, m, folds);
}

CvResult grid_search_cv(const Dataset& data, const KernelBank& bank, const GridSpec& grid,
                        const Hyperparams& base, const TrainOptions& options, unsigned threads) {
  data.validate();
  grid.validate();
  base.validate();

  const auto folds = kfold_split(data.labels, grid.folds, grid.seed, grid.stratify);
  const std::size_t n_folds = folds.size();
  const std::size_t n_cells = grid.c_grid.size() * grid.rho_grid.size();

  // The Gram stack depends only on the fold, so it is shared by every cell.
  std::vector<Dataset> train_sets, val_sets;
  std::vector<std::optional<GramStack>> grams(n_folds);
  for (const auto& f : folds) {
    train_sets.push_back(data.subset(f.train));
    val_sets.push_back(data.subset(f.validation));
  }
  for (std::size_t k = 0; k < n_folds; ++k) {
    try {
      grams[k] = GramStack::build(bank, train_sets[k].points, options.jitter);
    } catch (const Error&) {
      // every cell on this fold records a failure
    }
  }

  TrainOptions run_options;
  run_options.coupling = options.coupling;
  run_options.jitter = options.jitter;

  const std::size_t n_tasks = n_cells * n_folds;
  std::vector<double> score(n_tasks, 0.0);
  std::vector<char> failed(n_tasks, 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const std::size_t cell = t / n_folds;
      const std::size_t k = t % n_folds;
      if (!grams[k]) {
        failed[t] = 1;
        continue;
      }
      Hyperparams hp = Hyperparams::uniform(grid.c_grid[cell / grid.rho_grid.size()],
                                            grid.rho_grid[cell % grid.rho_grid.size()], base.tol,
                                            base.max_iter);
      try {
        const auto result = train(train_sets[k], *grams[k], bank, hp, run_options);
        score[t] = evaluate(result.model, val_sets[k]).tacc;
      } catch (const std::exception&) {
        failed[t] = 1;
      }
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }

  CvResult out;
  bool have_best = false;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    CvCell row;
    row.c = grid.c_grid[cell / grid.rho_grid.size()];
    row.rho = grid.rho_grid[cell % grid.rho_grid.size()];
    double sum = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < n_folds; ++k) {
      const double s = score[cell * n_folds + k];
      sum += s;
      sq += s * s;
      row.failures += failed[cell * n_folds + k];
    }
    const auto n = static_cast<double>(n_folds);
    row.mean_tacc = sum / n;
    row.std_tacc = std::sqrt(std::max(0.0, sq / n - row.mean_tacc * row.mean_tacc));
    out.table.push_back(row);

    const bool better =
        !have_best || row.mean_tacc > out.best_score ||
        (row.mean_tacc == out.best_score &&
         (row.c < out.best_c || (row.c == out.best_c && row.rho < out.best_rho)));
    if (better) {
      out.best_c = row.c;
      out.best_rho = row.rho;
      out.best_score = row.mean_tacc;
      have_best = true;
    }
  }
  return out;
}

void write_cv_table(const CvResult& result, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& os) {
    os << std::setprecision(17) << "C,rho,mean_tacc,std_tacc,failures\n";
    for (const auto& r : result.table)
      os << r.c << ',' << r.rho << ',' << r.mean_tacc << ',' << r.std_tacc << ',' << r.failures
         << '\n';
  });
}

}  // namespace mklsvm
