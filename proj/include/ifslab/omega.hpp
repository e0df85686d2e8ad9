#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifslab/ifs.hpp"
#include "ifslab/point_cloud.hpp"

namespace ifslab {

/// Finite-tail approximation of the omega-limit set of an orbit.
///
/// Tail points (indices >= burn_in) are clustered greedily in arrival order:
/// a point opens a new representative iff it is farther than cluster_eps from
/// every existing one. Hence every tail point lies within cluster_eps of a
/// representative, and representatives are pairwise farther than cluster_eps
/// apart.
struct OmegaEstimate {
  PointCloud representatives;
  std::size_t burn_in = 0;
  std::size_t tail_length = 0;
  double cluster_eps = 0.0;

  // provenance, copied into reports
  std::string driver;
  std::optional<Vector> x0;
};

OmegaEstimate estimate_omega(const Orbit& orbit, std::size_t burn_in, double cluster_eps);

/// max over a in A of the distance from a to B.
double directed_hausdorff(const PointCloud& a, const PointCloud& b);

/// Symmetric Hausdorff distance, brute force O(|A||B|).
double hausdorff(const PointCloud& a, const PointCloud& b);

struct InvarianceReport {
  double forward_excess = 0.0;   // directed distance Phi(S) -> S
  double backward_excess = 0.0;  // directed distance S -> Phi(S)
  double symmetric = 0.0;
  double tolerance = 0.0;
  std::size_t set_size = 0;
  std::size_t image_size = 0;

  bool subinvariant() const noexcept { return forward_excess <= tolerance; }
  bool superinvariant() const noexcept { return backward_excess <= tolerance; }
  bool invariant() const noexcept { return subinvariant() && superinvariant(); }
};

InvarianceReport check_invariance(const IFSystem& sys, const PointCloud& s, double tol);

/// Finite union of closed segments; used for continuum reference sets such
/// as a polygon boundary, where a sampled cloud is only approximately
/// invariant.
class SegmentUnion {
 public:
  SegmentUnion() = default;
  void add(Vector a, Vector b);

  /// Closed polygon boundary through the vertices in order.
  static SegmentUnion polygon(const std::vector<Vector>& vertices);

  double distance_to(const Vector& x) const;

  /// Every segment sampled with step at most `spacing`, endpoints included.
  PointCloud sample(double spacing) const;

  const std::vector<std::pair<Vector, Vector>>& segments() const noexcept { return segments_; }
  std::size_t dim() const noexcept { return segments_.empty() ? 0 : segments_.front().first.dim(); }

 private:
  std::vector<std::pair<Vector, Vector>> segments_;
};

/// Invariance of a segment union judged on a sampling of it: the forward
/// excess measures images of the samples against the exact union, the
/// backward excess measures the samples against the image cloud.
InvarianceReport check_invariance(const IFSystem& sys, const SegmentUnion& s, double spacing, double tol);

/// Boundary of the polygon through `vertices`, sampled at step <= spacing.
PointCloud polygon_boundary_cloud(const std::vector<Vector>& vertices, double spacing);

enum class Verdict { Pass, Fail, HypothesisUnmet };

std::string to_string(Verdict v);

struct MonotoneDistanceReport {
  std::vector<double> distances;  // d(x_n, C), n = 0..steps
  InvarianceReport hypothesis;    // subinvariance of C
  Verdict verdict = Verdict::Fail;
  double slack = 0.0;
  std::optional<std::size_t> first_violation;  // n with d_{n+1} > d_n + slack
  double max_increase = 0.0;                   // max of d_{n+1} - d_n
  bool bounded = false;                        // d_n <= d_0 + slack for all n
  double infimum = 0.0;
  double tail_oscillation = 0.0;  // max - min of d_n over the second half
};

/// Distance from the orbit to a subinvariant set never increases. The
/// hypothesis is checked with check_invariance at `tol`; when it fails the
/// verdict is HypothesisUnmet and monotonicity is reported but not judged.
MonotoneDistanceReport check_monotone_distance(const IFSystem& sys, const Orbit& orbit, const PointCloud& c,
                                               double tol = 1e-9);
MonotoneDistanceReport check_monotone_distance(const IFSystem& sys, const Orbit& orbit,
                                               const SegmentUnion& c, double sample_spacing,
                                               double tol = 1e-9);

struct MinimalityReport {
  InvarianceReport hypothesis;
  double tolerance = 0.0;
  double min_distance = 0.0;        // closest approach of candidate and omega
  double max_outside = 0.0;         // directed distance omega -> candidate
  bool intersects = false;
  bool contains = false;
  Verdict verdict = Verdict::Fail;
};

/// A closed subinvariant set that meets the omega-limit set contains it.
/// Disjoint candidates pass vacuously (intersects == false).
MinimalityReport check_minimality(const IFSystem& sys, const OmegaEstimate& omega, const PointCloud& candidate,
                                  double tol);

struct CompareReport {
  double distance = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

CompareReport compare_omegas(const OmegaEstimate& a, const OmegaEstimate& b, double tol);

}  // namespace ifslab
