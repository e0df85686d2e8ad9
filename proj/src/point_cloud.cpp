#include "ifslab/point_cloud.hpp"

#include <limits>

namespace ifslab {

PointCloud::PointCloud(const std::vector<Vector>& points) {
  for (const auto& p : points) insert(p);
}

bool PointCloud::insert(const Vector& p) {
  if (dim_ == 0) dim_ = p.dim();
  if (p.dim() != dim_) throw DimensionError(dim_, p.dim(), "PointCloud::insert");
  for (const auto& q : points_) {
    if (distance(p, q) <= kMergeTol) return false;
  }
  points_.push_back(p);
  return true;
}

double PointCloud::distance_to(const Vector& x) const {
  if (points_.empty()) throw ValidationError("PointCloud::distance_to: empty cloud");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : points_) {
    const double d = distance(x, q);
    if (d < best) best = d;
  }
  return best;
}

bool PointCloud::within(const PointCloud& other, double tol) const {
  for (const auto& p : points_) {
    if (other.distance_to(p) > tol) return false;
  }
  return true;
}

}  // namespace ifslab
