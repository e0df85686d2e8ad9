#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ifslab/omega.hpp"
#include "test_support.hpp"

using namespace ifslab;
using ifslab::testing::Gen;

namespace {

OmegaEstimate fake_omega(const std::vector<Vector>& pts) {
  OmegaEstimate e;
  e.representatives = PointCloud(pts);
  e.cluster_eps = 1e-6;
  e.tail_length = pts.size();
  return e;
}

Orbit fake_orbit(const std::vector<Vector>& pts) {
  Orbit o;
  o.points = pts;
  o.symbols.assign(pts.size() - 1, 1);
  return o;
}

double brute_directed(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = INFINITY;
    for (const auto& q : b) best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("estimate_omega on the classic line configurations") {
  SUBCASE("intersecting lines converge to the intersection") {
    const Orbit o = run_orbit(testing::example1(), Vector{0.0, 2.0}, DriverSpec::cyclic_identity(2), 200);
    const OmegaEstimate e = estimate_omega(o, 100, 1e-6);
    REQUIRE(e.representatives.size() == 1);
    CHECK(e.representatives.points()[0].norm() <= 1e-12);
    CHECK(e.tail_length == 101);
  }
  SUBCASE("parallel lines give a two-point cycle") {
    const Orbit o = run_orbit(testing::example2(), Vector{0.0, 0.3}, DriverSpec::cyclic_identity(2), 100);
    const OmegaEstimate e = estimate_omega(o, 10, 1e-6);
    const PointCloud expect(std::vector<Vector>{{0.0, 0.0}, {0.0, 1.0}});
    CHECK(e.representatives.size() == 2);
    CHECK(hausdorff(e.representatives, expect) <= 1e-12);
  }
  SUBCASE("square under a disjunctive driver visits every corner") {
    const Orbit o = run_orbit(testing::example3(), Vector{0.3, 0.7}, DriverSpec::disjunctive(4), 10000);
    const OmegaEstimate e = estimate_omega(o, 1000, 1e-6);
    CHECK(e.representatives.size() == 4);
    CHECK(hausdorff(e.representatives, PointCloud(testing::square_corners())) <= 1e-9);
  }
  SUBCASE("errors") {
    const Orbit o = run_orbit(testing::example1(), Vector{0.0, 2.0}, DriverSpec::cyclic_identity(2), 10);
    CHECK_THROWS_AS(estimate_omega(o, 11, 1e-6), ValidationError);
    CHECK_THROWS_AS(estimate_omega(o, 0, 0.0), ValidationError);
    CHECK_NOTHROW(estimate_omega(o, 10, 1e-6));
  }
}

TEST_CASE("property: representatives cover the tail and are eps-separated") {
  Gen g(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> pts;
    const std::size_t n = 2 + g.index(300);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(g.vec(2, 3.0));
    const std::size_t burn = g.index(n);
    const double eps = g.uniform(0.05, 2.0);
    const OmegaEstimate e = estimate_omega(fake_orbit(pts), burn, eps);
    const auto& reps = e.representatives.points();
    for (std::size_t i = burn; i < n; ++i) CHECK(e.representatives.distance_to(pts[i]) <= eps);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK(distance(reps[i], reps[j]) > eps);
    }
    // representatives are tail points, in arrival order
    CHECK(reps.front() == pts[burn]);
  }
}

TEST_CASE("hausdorff examples") {
  const PointCloud origin(std::vector<Vector>{{0.0, 0.0}});
  const PointCloud far(std::vector<Vector>{{3.0, 4.0}});
  CHECK(hausdorff(origin, far) == 5.0);

  const PointCloud pair(std::vector<Vector>{{0.0, 0.0}, {1.0, 0.0}});
  CHECK(directed_hausdorff(origin, pair) == 0.0);
  CHECK(directed_hausdorff(pair, origin) == 1.0);
  CHECK(hausdorff(pair, origin) == 1.0);

  CHECK_THROWS_AS(hausdorff(origin, PointCloud(2)), ValidationError);
  CHECK_THROWS_AS(hausdorff(origin, PointCloud(std::vector<Vector>{{0.0, 0.0, 0.0}})), DimensionError);
}

TEST_CASE("property: hausdorff is a metric and matches brute force") {
  Gen g(8);
  auto cloud = [&] {
    std::vector<Vector> pts;
    const std::size_t n = 1 + g.index(20);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(g.vec(2));
    return pts;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = cloud();
    const auto b = cloud();
    const auto c = cloud();
    const PointCloud A(a), B(b), C(c);
    const double ab = hausdorff(A, B);
    CHECK(ab == doctest::Approx(std::max(brute_directed(a, b), brute_directed(b, a))).epsilon(1e-14));
    CHECK(ab == hausdorff(B, A));
    CHECK(hausdorff(A, A) == 0.0);
    CHECK(ab >= 0.0);
    CHECK(hausdorff(A, C) <= ab + hausdorff(B, C) + 1e-12);
  }
}

TEST_CASE("check_invariance on finite clouds") {
  const IFSystem square = testing::example3();
  SUBCASE("square corners are invariant") {
    const auto rep = check_invariance(square, PointCloud(testing::square_corners()), 1e-12);
    CHECK(rep.invariant());
    CHECK(rep.forward_excess == 0.0);
    CHECK(rep.backward_excess == 0.0);
    CHECK(rep.set_size == 4);
    CHECK(rep.image_size == 4);
  }
  SUBCASE("a midpoint is superinvariant but not subinvariant") {
    const auto rep = check_invariance(square, PointCloud(std::vector<Vector>{{0.5, 0.0}}), 1e-9);
    // (0.5, 1) lies in the image at distance 1 from the set
    CHECK(rep.forward_excess == doctest::Approx(1.0));
    CHECK(rep.backward_excess == 0.0);
    CHECK_FALSE(rep.subinvariant());
    CHECK(rep.superinvariant());
    CHECK(rep.symmetric == doctest::Approx(1.0));
  }
  SUBCASE("a fixed point of a single map") {
    const IFSystem one = testing::lines({{0.0, 1.0, 0.0}});
    CHECK(check_invariance(one, PointCloud(std::vector<Vector>{{2.0, 0.0}}), 0.0).invariant());
    CHECK_FALSE(check_invariance(one, PointCloud(std::vector<Vector>{{2.0, 1.0}}), 0.5).invariant());
  }
}

TEST_CASE("SegmentUnion") {
  const SegmentUnion tri = SegmentUnion::polygon(testing::triangle_vertices());
  CHECK(tri.segments().size() == 3);
  CHECK(tri.distance_to(Vector{0.5, 0.5}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tri.distance_to(Vector{0.25, 0.25}) == doctest::Approx(0.25));
  CHECK(tri.distance_to(Vector{-3.0, -4.0}) == doctest::Approx(5.0));
  CHECK(tri.distance_to(Vector{1.0, 1.0}) == doctest::Approx(std::sqrt(0.5)));

  const PointCloud s = tri.sample(0.1);
  for (const auto& p : s.points()) CHECK(tri.distance_to(p) <= 1e-15);
  Gen g(2);
  for (int k = 0; k < 200; ++k) {
    const Vector x = g.vec(2, 2.0);
    // sample distance overestimates by at most half the spacing
    CHECK(s.distance_to(x) >= tri.distance_to(x) - 1e-12);
    CHECK(s.distance_to(x) <= tri.distance_to(x) + 0.05 + 1e-12);
  }
}

TEST_CASE("triangle boundary invariance: exact segments versus samples") {
  const IFSystem sys = testing::example4();
  const SegmentUnion tri = SegmentUnion::polygon(testing::triangle_vertices());
  const auto exact = check_invariance(sys, tri, 0.01, 1e-9);
  CHECK(exact.subinvariant());
  CHECK(exact.backward_excess <= 0.01);
  // the sampled cloud is only approximately subinvariant
  const auto sampled = check_invariance(sys, tri.sample(0.01), 1e-9);
  CHECK_FALSE(sampled.subinvariant());
  CHECK(sampled.forward_excess <= 0.01);
}

TEST_CASE("check_monotone_distance") {
  SUBCASE("square orbit approaches the corners monotonically") {
    const Orbit o = run_orbit(testing::example3(), Vector{0.3, 0.7}, DriverSpec::disjunctive(4), 2000);
    const auto rep = check_monotone_distance(testing::example3(), o, PointCloud(testing::square_corners()));
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.distances.size() == 2001);
    CHECK(rep.bounded);
    CHECK_FALSE(rep.first_violation.has_value());
    CHECK(rep.infimum <= 1e-12);
  }
  SUBCASE("triangle orbit against the exact boundary") {
    const Orbit o = run_orbit(testing::example4(), Vector{2.0, 3.0}, DriverSpec::disjunctive(3), 5000);
    const auto rep = check_monotone_distance(testing::example4(), o, SegmentUnion::polygon(testing::triangle_vertices()),
                                             0.005);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.max_increase <= rep.slack);
  }
  SUBCASE("sampled triangle boundary does not meet the hypothesis") {
    const Orbit o = run_orbit(testing::example4(), Vector{2.0, 3.0}, DriverSpec::disjunctive(3), 500);
    const auto rep = check_monotone_distance(testing::example4(), o, polygon_boundary_cloud(testing::triangle_vertices(), 0.005));
    CHECK(rep.verdict == Verdict::HypothesisUnmet);
  }
  SUBCASE("an orbit that walks away is flagged") {
    const Orbit o = fake_orbit({{0.0, 0.0}, {0.1, 0.1}, {5.0, 5.0}});
    const auto rep = check_monotone_distance(testing::example3(), o, PointCloud(testing::square_corners()));
    CHECK(rep.verdict == Verdict::Fail);
    REQUIRE(rep.first_violation.has_value());
    CHECK(*rep.first_violation == 0);
    CHECK_FALSE(rep.bounded);
  }
}

TEST_CASE("property: distance to a subinvariant set never increases") {
  Gen g(77);
  const IFSystem sys = testing::example3();
  const PointCloud corners(testing::square_corners());
  for (int trial = 0; trial < 30; ++trial) {
    const auto driver = DriverSpec::iid_uniform(static_cast<std::uint64_t>(trial), 4);
    const Orbit o = run_orbit(sys, g.vec(2, 5.0), driver, 300);
    const auto rep = check_monotone_distance(sys, o, corners);
    CHECK(rep.verdict == Verdict::Pass);
  }
}

TEST_CASE("check_minimality") {
  const IFSystem sys = testing::example3();
  const Orbit o = run_orbit(sys, Vector{0.3, 0.7}, DriverSpec::disjunctive(4), 10000);
  const OmegaEstimate omega = estimate_omega(o, 1000, 1e-6);

  SUBCASE("the corners contain omega") {
    const auto rep = check_minimality(sys, omega, PointCloud(testing::square_corners()), 1e-9);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.intersects);
    CHECK(rep.contains);
  }
  SUBCASE("a single corner is not subinvariant") {
    const auto rep = check_minimality(sys, omega, PointCloud(std::vector<Vector>{{0.0, 0.0}}), 1e-9);
    CHECK(rep.verdict == Verdict::HypothesisUnmet);
  }
  SUBCASE("disjoint invariant candidates pass vacuously") {
    const IFSystem par = testing::example2();
    const Orbit po = run_orbit(par, Vector{0.0, 0.3}, DriverSpec::cyclic_identity(2), 100);
    const auto rep = check_minimality(par, estimate_omega(po, 10, 1e-6),
                                      PointCloud(std::vector<Vector>{{5.0, 0.0}, {5.0, 1.0}}), 1e-9);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK_FALSE(rep.intersects);
    CHECK(rep.min_distance == doctest::Approx(5.0));
  }
  SUBCASE("an estimate reaching outside the candidate fails") {
    const auto rep =
        check_minimality(sys, fake_omega({{0.0, 0.0}, {7.0, 7.0}}), PointCloud(testing::square_corners()), 1e-9);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK(rep.intersects);
    CHECK_FALSE(rep.contains);
  }
}

TEST_CASE("compare_omegas") {
  const IFSystem sys = testing::example3();
  const auto a = estimate_omega(run_orbit(sys, Vector{0.3, 0.7}, DriverSpec::disjunctive(4), 5000), 500, 1e-6);
  const auto b = estimate_omega(run_orbit(sys, Vector{0.3, 0.7}, DriverSpec::iid_uniform(3, 4), 5000), 500, 1e-6);
  const auto rep = compare_omegas(a, b, 1e-9);
  CHECK(rep.passed);
  CHECK(rep.distance <= 1e-9);

  const auto neg = compare_omegas(fake_omega({{0.0, 0.0}}), fake_omega({{3.0, 4.0}}), 1e-9);
  CHECK_FALSE(neg.passed);
  CHECK(neg.distance == 5.0);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::Pass) == "pass");
  CHECK(to_string(Verdict::Fail) == "fail");
  CHECK(to_string(Verdict::HypothesisUnmet) == "hypothesis_unmet");
}

TEST_CASE("estimates from long disjunctive runs are superinvariant and nearly invariant") {
  struct Case {
    IFSystem sys;
    Vector x0;
    double eps;
    double symmetric_bound;
  };
  const std::vector<Case> cases{
      {testing::example1(), Vector{0.0, 2.0}, 1e-6, 1e-6},
      {testing::example2(), Vector{0.0, 0.3}, 1e-6, 1e-6},
      {testing::example3(), Vector{0.3, 0.7}, 1e-6, 1e-6},
      {testing::example4(), Vector{2.0, 3.0}, 1e-2, 0.05},
  };
  for (const auto& c : cases) {
    const Orbit o = run_orbit(c.sys, c.x0, DriverSpec::disjunctive(c.sys.alphabet()), 20000);
    const OmegaEstimate e = estimate_omega(o, 2000, c.eps);
    const auto inv = check_invariance(c.sys, e.representatives, c.symmetric_bound);
    CHECK(inv.backward_excess <= 2 * c.eps + 1e-3);
    CHECK(inv.symmetric <= c.symmetric_bound);
  }
}
