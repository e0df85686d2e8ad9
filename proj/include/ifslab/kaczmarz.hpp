#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ifslab/drivers.hpp"
#include "ifslab/ifs.hpp"
#include "ifslab/omega.hpp"

namespace ifslab {

struct Row {
  Vector coeffs;
  double rhs = 0.0;
};

/// A x = b as a list of rows. Every row must have |a_i| >= 1e-12.
class LinearSystem {
 public:
  explicit LinearSystem(std::vector<Row> rows);

  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// max_i |a_i . x - b_i| / |a_i|, the largest distance to a row hyperplane.
  double residual(const Vector& x) const;

 private:
  std::vector<Row> rows_;
  std::size_t dim_;
};

/// One hyperplane projection per row, in row order.
IFSystem system_to_ifs(const LinearSystem& sys);

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::optional<Vector> x0;  // origin when absent
};

struct SolveReport {
  Vector final_point;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<OmegaEstimate> omega;  // set when max_iter was reached
  double max_norm = 0.0;               // max |x_n| over the run
  double max_norm_first_half = 0.0;    // max |x_n| over n <= iterations / 2
};

/// Projects row by row in the order the driver dictates. Stops as soon as
/// the residual drops to tol, or after max_iter projections; in the latter
/// case the final 20% of the orbit is clustered into an omega estimate with
/// cluster_eps = max(tol, 1e-9).
SolveReport solve(const LinearSystem& sys, const DriverSpec& driver, const SolveOptions& opts);

/// Infimum distance between the hyperplanes of rows i and j (0-based).
/// Non-parallel rows (angle above 1e-10) give 0.
double gap_between(const LinearSystem& sys, std::size_t i, std::size_t j);

}  // namespace ifslab
