#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mklsvm/admm.hpp"
#include "mklsvm/data.hpp"
#include "mklsvm/kernel.hpp"

namespace mklsvm {

// {2^-2, ..., 2^7}
std::vector<double> default_c_grid();
// {a^-2, ..., a^7} with a = sqrt(2)
std::vector<double> default_rho_grid();

// Cross-validation grid over (C, rho); every rho sets rho1 = rho2 = rho3.
struct GridSpec {
  std::vector<double> c_grid = default_c_grid();
  std::vector<double> rho_grid = default_rho_grid();
  int folds = 10;
  std::uint64_t seed = 0;
  // Keep the class ratio of every fold close to the full set's.
  bool stratify = true;

  void validate() const;
};

struct Fold {
  IndexSet train;
  IndexSet validation;
};

// Shuffled partition into `folds` validation sets whose sizes differ by at
// most one. Throws InvalidArgument if folds < 2 or folds > m.
std::vector<Fold> kfold_split(Index m, int folds, std::uint64_t seed);
// Label-aware variant: with `stratify`, each class is shuffled separately and
// the classes are dealt round-robin, so sizes still differ by at most one.
std::vector<Fold> kfold_split(const Eigen::Ref<const Vector>& labels, int folds,
                              std::uint64_t seed, bool stratify);

struct CvCell {
  double c = 0.0;
  double rho = 0.0;
  double mean_tacc = 0.0;
  double std_tacc = 0.0;  // population standard deviation over folds
  int failures = 0;       // folds whose training threw; each scored 0
};

struct CvResult {
  double best_c = 0.0;
  double best_rho = 0.0;
  double best_score = 0.0;
  std::vector<CvCell> table;  // C-major: for each C, every rho in grid order
};

// Trains on each fold complement and scores TACC on the fold. The best cell
// has the highest mean; ties go to the smaller C, then the smaller rho, then
// the earlier cell. `base` supplies tol and max_iter. `threads` = 0 uses the
// hardware concurrency. Results do not depend on the thread count.
CvResult grid_search_cv(const Dataset& data, const KernelBank& bank, const GridSpec& grid,
                        const Hyperparams& base, const TrainOptions& options = {},
                        unsigned threads = 0);

// Columns C,rho,mean_tacc,std_tacc,failures.
void write_cv_table(const CvResult& result, const std::filesystem::path& path);

}  // namespace mklsvm
