#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "mklsvm/data.hpp"
#include "mklsvm/types.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mklsvm_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// (+-0.5, +-0.5) labelled by quadrant.
inline mklsvm::Dataset four_points() {
  mklsvm::Dataset d;
  d.points.resize(4, 2);
  d.points << 0.5, 0.5, -0.5, 0.5, -0.5, -0.5, 0.5, -0.5;
  d.labels.resize(4);
  d.labels << 1, -1, 1, -1;
  return d;
}

inline mklsvm::Vector random_vector(mklsvm::Index n, std::mt19937_64& rng, double lo = -1.0,
                                    double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  mklsvm::Vector v(n);
  for (mklsvm::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace testing
