#include "ifslab/omega.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ifslab {

OmegaEstimate estimate_omega(const Orbit& orbit, std::size_t burn_in, double cluster_eps) {
  if (!(cluster_eps > 0.0)) throw ValidationError("estimate_omega: cluster_eps must be positive");
  if (burn_in >= orbit.points.size()) {
    throw ValidationError("estimate_omega: empty tail (burn_in " + std::to_string(burn_in) +
                          " >= orbit length " + std::to_string(orbit.points.size()) + ")");
  }

  std::vector<Vector> reps;
  for (std::size_t n = burn_in; n < orbit.points.size(); ++n) {
    const Vector& p = orbit.points[n];
    bool covered = false;
    // most recently opened clusters are the likeliest hits for recurrent orbits
    for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
      if (distance(p, *it) <= cluster_eps) {
        covered = true;
        break;
      }
    }
    if (!covered) reps.push_back(p);
  }

  OmegaEstimate est;
  est.representatives = PointCloud(reps.front().dim());
  for (auto& r : reps) est.representatives.insert(r);
  est.burn_in = burn_in;
  est.tail_length = orbit.points.size() - burn_in;
  est.cluster_eps = cluster_eps;
  est.x0 = orbit.points.front();
  return est;
}

double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw ValidationError("hausdorff: empty cloud");
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim(), "hausdorff");
  double worst = 0.0;
  for (const auto& p : a.points()) worst = std::max(worst, b.distance_to(p));
  return worst;
}

double hausdorff(const PointCloud& a, const PointCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

InvarianceReport check_invariance(const IFSystem& sys, const PointCloud& s, double tol) {
  const PointCloud image = hutchinson(sys, s);
  InvarianceReport rep;
  rep.forward_excess = directed_hausdorff(image, s);
  rep.backward_excess = directed_hausdorff(s, image);
  rep.symmetric = std::max(rep.forward_excess, rep.backward_excess);
  rep.tolerance = tol;
  rep.set_size = s.size();
  rep.image_size = image.size();
  return rep;
}

// ---------------------------------------------------------------------------

void SegmentUnion::add(Vector a, Vector b) {
  require_same_dim(a, b, "SegmentUnion::add");
  if (!segments_.empty()) require_same_dim(segments_.front().first, a, "SegmentUnion::add");
  segments_.emplace_back(std::move(a), std::move(b));
}

SegmentUnion SegmentUnion::polygon(const std::vector<Vector>& vertices) {
  if (vertices.size() < 2) throw ValidationError("SegmentUnion::polygon: need at least two vertices");
  SegmentUnion u;
  for (std::size_t i = 0; i < vertices.size(); ++i) u.add(vertices[i], vertices[(i + 1) % vertices.size()]);
  return u;
}

double SegmentUnion::distance_to(const Vector& x) const {
  if (segments_.empty()) throw ValidationError("SegmentUnion::distance_to: empty set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : segments_) {
    const Vector ab = b - a;
    const double len2 = ab.norm_squared();
    double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, distance(x, a + ab * t));
  }
  return best;
}

PointCloud SegmentUnion::sample(double spacing) const {
  if (!(spacing > 0.0)) throw ValidationError("SegmentUnion::sample: spacing must be positive");
  PointCloud cloud(dim());
  for (const auto& [a, b] : segments_) {
    const double len = distance(a, b);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing)));
    const Vector ab = b - a;
    for (std::size_t k = 0; k <= pieces; ++k) {
      cloud.insert(a + ab * (static_cast<double>(k) / static_cast<double>(pieces)));
    }
  }
  return cloud;
}

InvarianceReport check_invariance(const IFSystem& sys, const SegmentUnion& s, double spacing, double tol) {
  const PointCloud samples = s.sample(spacing);
  const PointCloud image = hutchinson(sys, samples);
  InvarianceReport rep;
  for (const auto& p : image.points()) rep.forward_excess = std::max(rep.forward_excess, s.distance_to(p));
  rep.backward_excess = directed_hausdorff(samples, image);
  rep.symmetric = std::max(rep.forward_excess, rep.backward_excess);
  rep.tolerance = tol;
  rep.set_size = samples.size();
  rep.image_size = image.size();
  return rep;
}

PointCloud polygon_boundary_cloud(const std::vector<Vector>& vertices, double spacing) {
  return SegmentUnion::polygon(vertices).sample(spacing);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HypothesisUnmet: return "hypothesis_unmet";
  }
  return "fail";
}

// ---------------------------------------------------------------------------

namespace {

template <class DistanceFn>
MonotoneDistanceReport monotone_distance_impl(const Orbit& orbit, InvarianceReport hypothesis, DistanceFn dist) {
  MonotoneDistanceReport rep;
  rep.hypothesis = hypothesis;
  rep.distances.reserve(orbit.points.size());
  for (const auto& p : orbit.points) rep.distances.push_back(dist(p));
  if (rep.distances.empty()) throw ValidationError("check_monotone_distance: empty orbit");

  const auto& d = rep.distances;
  rep.slack = 1e-9 * (1.0 + d.front());
  rep.bounded = true;
  rep.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    const double inc = d[n + 1] - d[n];
    rep.max_increase = std::max(rep.max_increase, inc);
    if (inc > rep.slack && !rep.first_violation) rep.first_violation = n;
  }
  if (d.size() == 1) rep.max_increase = 0.0;
  for (double v : d) {
    if (v > d.front() + rep.slack) rep.bounded = false;
  }
  rep.infimum = *std::min_element(d.begin(), d.end());
  const auto half = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  const auto [lo, hi] = std::minmax_element(half, d.end());
  rep.tail_oscillation = *hi - *lo;

  if (!hypothesis.subinvariant()) rep.verdict = Verdict::HypothesisUnmet;
  else rep.verdict = (!rep.first_violation && rep.bounded) ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace

MonotoneDistanceReport check_monotone_distance(const IFSystem& sys, const Orbit& orbit, const PointCloud& c,
                                               double tol) {
  return monotone_distance_impl(orbit, check_invariance(sys, c, tol),
                                [&](const Vector& p) { return c.distance_to(p); });
}

MonotoneDistanceReport check_monotone_distance(const IFSystem& sys, const Orbit& orbit,
                                               const SegmentUnion& c, double sample_spacing, double tol) {
  return monotone_distance_impl(orbit, check_invariance(sys, c, sample_spacing, tol),
                                [&](const Vector& p) { return c.distance_to(p); });
}

MinimalityReport check_minimality(const IFSystem& sys, const OmegaEstimate& omega, const PointCloud& candidate,
                                  double tol) {
  MinimalityReport rep;
  rep.tolerance = tol;
  rep.hypothesis = check_invariance(sys, candidate, tol);
  const PointCloud& reps = omega.representatives;
  if (reps.dim() != candidate.dim()) throw DimensionError(candidate.dim(), reps.dim(), "check_minimality");

  rep.min_distance = std::numeric_limits<double>::infinity();
  for (const auto& p : reps.points()) rep.min_distance = std::min(rep.min_distance, candidate.distance_to(p));
  rep.max_outside = directed_hausdorff(reps, candidate);
  rep.intersects = rep.min_distance <= tol;
  rep.contains = rep.max_outside <= tol;

  if (!rep.hypothesis.subinvariant()) rep.verdict = Verdict::HypothesisUnmet;
  else if (!rep.intersects) rep.verdict = Verdict::Pass;  // vacuous
  else rep.verdict = rep.contains ? Verdict::Pass : Verdict::Fail;
  return rep;
}

CompareReport compare_omegas(const OmegaEstimate& a, const OmegaEstimate& b, double tol) {
  CompareReport rep;
  rep.distance = hausdorff(a.representatives, b.representatives);
  rep.tolerance = tol;
  rep.passed = rep.distance <= tol;
  return rep;
}

}  // namespace ifslab
