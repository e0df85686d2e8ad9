#pragma once

#include <cstddef>
#include <vector>

#include "ifslab/geometry.hpp"

namespace ifslab {

/// Small dense row-major matrix. Only what the contractivity diagnostics and
/// the affine maps need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit Matrix(const std::vector<std::vector<double>>& rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(const Vector& v) const;
  Matrix transpose() const;

  std::vector<std::vector<double>> to_rows() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SpectralNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value by power iteration on M^T M. Stops once successive
/// estimates differ by at most rel_tol (relative) or after max_iter steps.
SpectralNormResult spectral_norm(const Matrix& m, double rel_tol = 1e-12, int max_iter = 10000);

}  // namespace ifslab
