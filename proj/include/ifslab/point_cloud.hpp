#pragma once

#include <cstddef>
#include <vector>

#include "ifslab/geometry.hpp"

namespace ifslab {

inline constexpr double kMergeTol = 1e-12;

/// Finite set of points in R^d. Points closer than kMergeTol to an earlier
/// point are merged on insertion; insertion order is otherwise kept.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::size_t dim) : dim_(dim) {}
  explicit PointCloud(const std::vector<Vector>& points);

  /// Returns true when the point was new.
  bool insert(const Vector& p);

  const std::vector<Vector>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t dim() const noexcept { return dim_; }

  /// Euclidean distance from x to the nearest cloud point.
  double distance_to(const Vector& x) const;

  /// Every point of this cloud lies within tol of `other`.
  bool within(const PointCloud& other, double tol = kMergeTol) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Vector> points_;
};

}  // namespace ifslab
