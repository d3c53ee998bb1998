#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mklsvm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: wrong dimensions, out-of-range parameters, bad labels.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `line` is 1-based, 0 when not line-specific.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A Gram matrix failed its Cholesky factorization.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t kernel_index)
      : Error("kernel matrix not positive definite for kernel " +
              std::to_string(kernel_index) +
              " (duplicate or near-duplicate points? retry with a positive jitter)"),
        kernel_index_(kernel_index) {}
  std::size_t kernel_index() const noexcept { return kernel_index_; }

 private:
  std::size_t kernel_index_;
};

}  // namespace mklsvm
