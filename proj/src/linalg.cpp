#include "ifslab/linalg.hpp"

#include <cmath>
#include <cstdint>

namespace ifslab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ValidationError("Matrix: empty");
  rows_ = rows.size();
  cols_ = rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ValidationError("Matrix: ragged rows");
    for (double v : r) {
      if (!std::isfinite(v)) throw ValidationError("Matrix: entry is not finite");
      data_.push_back(v);
    }
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError(cols_, rhs.rows_, "Matrix::operator*");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.dim()) throw DimensionError(cols_, v.dim(), "Matrix*Vector");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return Vector(std::move(out));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

SpectralNormResult spectral_norm(const Matrix& m, double rel_tol, int max_iter) {
  SpectralNormResult res;
  const std::size_t n = m.cols();
  if (n == 0 || m.rows() == 0) {
    res.converged = true;
    return res;
  }
  const Matrix gram = m.transpose() * m;

  // Fixed irrational-ish start so the iterate is generically not orthogonal
  // to the dominant eigenvector; deterministic across runs.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.6180339887498949 * static_cast<double>(i % 7) + 0.1 * static_cast<double>(i);
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& e : x) e /= s;
    return s;
  };
  normalize(v);

  std::vector<double> w(n);
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += gram(i, j) * v[j];
      w[i] = s;
    }
    const double next = normalize(w);  // ||G v|| with ||v|| = 1
    res.iterations = it;
    if (next == 0.0) {
      // v landed in the kernel; for a generic start this means G = 0 on the
      // reachable subspace, i.e. the norm is 0 up to rounding.
      lambda = 0.0;
      res.converged = true;
      break;
    }
    v.swap(w);
    if (std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      res.converged = true;
      break;
    }
    lambda = next;
  }
  res.value = std::sqrt(lambda);
  return res;
}

}  // namespace ifslab
