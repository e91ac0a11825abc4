#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypercross/errors.hpp"
#include "hypercross/geometry.hpp"
#include "hypercross/polytope.hpp"

using namespace hypercross;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

std::vector<Point> cube_vertices(int d, double h = 1.0) {
  std::vector<Point> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Point p(d);
    for (int j = 0; j < d; ++j) p[j] = (mask >> j & 1) ? h : -h;
    out.push_back(p);
  }
  return out;
}

std::vector<Point> gaussian_points(int d, int n, Rng& rng) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Point p(d);
    for (int j = 0; j < d; ++j) p[j] = rng.normal();
    out.push_back(p);
  }
  return out;
}

// Vertex coordinates sorted lexicographically, for set comparison.
std::vector<std::vector<double>> vertex_set(const Polytope& p) {
  std::vector<std::vector<double>> out;
  for (const auto& v : p.vertices()) out.emplace_back(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

bool same_vertex_set(const Polytope& a, const Polytope& b, double tol) {
  auto x = vertex_set(a), y = vertex_set(b);
  if (x.size() != y.size()) return false;
  for (const auto& v : x) {
    bool found = false;
    for (const auto& w : y) {
      double dist = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) dist = std::max(dist, std::fabs(v[j] - w[j]));
      found |= dist <= tol;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("square plus centre") {
  std::vector<Point> pts = {vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.5})};
  const Polytope p = convex_hull(pts);
  CHECK(p.vertices().size() == 4);
  CHECK(p.f_vector() == FVector{{4, 4}});
  for (const auto& v : p.vertices()) CHECK((v - vec({0.5, 0.5})).norm() > 0.1);
}

TEST_CASE("regular simplex and cube in R^3") {
  std::vector<Point> simplex = {vec({1, 1, 1}), vec({1, -1, -1}), vec({-1, 1, -1}),
                                vec({-1, -1, 1})};
  CHECK(convex_hull(simplex).f_vector() == FVector{{4, 6, 4}});
  const Polytope cube = convex_hull(cube_vertices(3));
  CHECK(cube.f_vector() == FVector{{8, 12, 6}});
  CHECK(cube.facets().size() == 6);
}

TEST_CASE("hypercubes and cross-polytopes up to d = 5") {
  for (int d = 3; d <= 5; ++d) {
    CAPTURE(d);
    const Polytope cube = convex_hull(cube_vertices(d));
    // f_k of the d-cube: C(d, k) 2^(d-k)
    for (int k = 0; k < d; ++k) {
      double binom = 1.0;
      for (int i = 1; i <= k; ++i) binom = binom * (d - k + i) / i;
      CHECK(cube.f_vector()[k] == static_cast<std::int64_t>(binom * std::pow(2.0, d - k)));
    }
    const Polytope cross = polar_dual(cube);
    CHECK(cross.f_vector() == cube.f_vector().reversed());
    CHECK(cross.vertices().size() == static_cast<std::size_t>(2 * d));
  }
}

TEST_CASE("disk sample: containment and area") {
  Rng rng(21, 0);
  std::vector<Point> pts;
  while (pts.size() < 1000) {
    Point p(2);
    p << rng.uniform(-1, 1), rng.uniform(-1, 1);
    if (p.norm() <= 1.0) pts.push_back(p);
  }
  const Polytope hull = convex_hull(pts);
  for (const auto& p : pts) REQUIRE(hull.contains(p));
  double area = 0.0;
  const auto& v = hull.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    area += a[0] * b[1] - a[1] * b[0];
  }
  area *= 0.5;
  CHECK(area > 0.0);  // counter-clockwise
  CHECK(area <= M_PI);
  CHECK(hull.f_vector()[0] == hull.f_vector()[1]);
}

TEST_CASE("random hulls: Euler, containment, idempotence") {
  Rng rng(22, 0);
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      CAPTURE(d);
      CAPTURE(trial);
      const auto pts = gaussian_points(d, 15 + 10 * d, rng);
      const Polytope p = convex_hull(pts);
      REQUIRE(p.f_vector().satisfies_euler());
      for (const auto& x : pts) REQUIRE(p.contains(x));
      REQUIRE_NOTHROW(p.validate());
      const Polytope q = convex_hull(p.vertices());
      REQUIRE(same_vertex_set(p, q, 0.0));
      REQUIRE(q.f_vector() == p.f_vector());
    }
  }
}

TEST_CASE("50 gaussian points in R^3: f0 - f1 + f2 = 2") {
  Rng rng(23, 0);
  const auto f = convex_hull(gaussian_points(3, 50, rng)).f_vector();
  CHECK(f[0] - f[1] + f[2] == 2);
}

TEST_CASE("heavy-tailed point clouds") {
  // Radii r/U as produced by the limit-process sampler; coordinates span many
  // orders of magnitude.
  Rng rng(24, 0);
  for (int d = 2; d <= 3; ++d) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point> pts;
      for (int i = 0; i < 60; ++i) pts.push_back(0.01 / rng.uniform_open() * uniform_on_sphere(d, rng));
      const Polytope p = convex_hull(pts);
      REQUIRE(p.f_vector().satisfies_euler());
      for (const auto& x : pts) REQUIRE(p.contains(x));
    }
  }
}

TEST_CASE("degenerate input throws") {
  std::vector<Point> line = {vec({0, 0}), vec({1, 1}), vec({2, 2}), vec({3, 3})};
  CHECK_THROWS_AS(convex_hull(line), Degenerate);
  std::vector<Point> plane = {vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({1, 1, 0}),
                              vec({0.3, 0.2, 0})};
  CHECK_THROWS_AS(convex_hull(plane), Degenerate);
}

TEST_CASE("coplanar points on cube faces are merged") {
  auto pts = cube_vertices(3);
  pts.push_back(vec({0, 0, 1}));   // face centre
  pts.push_back(vec({1, 0, 0.3})); // on a face
  pts.push_back(vec({1, 1, 0}));   // on an edge
  const Polytope p = convex_hull(pts);
  CHECK(p.f_vector() == FVector{{8, 12, 6}});
}

TEST_CASE("polar dual of the cube is the octahedron") {
  const Polytope cube = convex_hull(cube_vertices(3));
  const Polytope oct = polar_dual(cube);
  CHECK(oct.f_vector() == FVector{{6, 12, 8}});
  for (const auto& v : oct.vertices()) CHECK(v.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("inscribed n-gon dualizes to a circumscribed n-gon") {
  for (int n : {3, 5, 12}) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(vec({std::cos(2 * M_PI * i / n), std::sin(2 * M_PI * i / n)}));
    const Polytope p = convex_hull(pts);
    const Polytope q = polar_dual(p);
    CHECK(q.f_vector() == p.f_vector());
    for (const auto& v : q.vertices()) CHECK(v.norm() == doctest::Approx(1.0 / std::cos(M_PI / n)));
  }
}

TEST_CASE("double dual and f-vector reversal on random hulls") {
  Rng rng(25, 0);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 30; ++trial) {
      const Polytope p = convex_hull(gaussian_points(d, 40, rng));
      if (!(p.max_violation(Point::Zero(d)) < -1e-6)) continue;
      const Polytope q = polar_dual(p);
      REQUIRE(q.f_vector() == p.f_vector().reversed());
      const Polytope pp = polar_dual(q);
      REQUIRE(same_vertex_set(p, pp, 1e-7));
    }
  }
}

TEST_CASE("polar dual requires the origin inside") {
  std::vector<Point> pts = {vec({1, 1}), vec({2, 1}), vec({1, 2})};
  CHECK_THROWS_AS(polar_dual(convex_hull(pts)), OriginNotInterior);
}

TEST_CASE("halfspace intersection") {
  std::vector<Hyperplane> box;
  for (int j = 0; j < 3; ++j) {
    Point e = Point::Zero(3);
    e[j] = 1.0;
    box.push_back({e, 1.0});
    box.push_back({-e, 1.0});
  }
  box.push_back({vec({1, 1, 1}) / std::sqrt(3.0), 10.0});  // redundant
  const Polytope p = polytope_from_halfspaces(3, box);
  CHECK(p.f_vector() == FVector{{8, 12, 6}});
  CHECK(p.facets().size() == 6);
}

TEST_CASE("approx_hausdorff") {
  const Polytope cube = convex_hull(cube_vertices(3));
  CHECK(approx_hausdorff(cube, cube, 200) == 0.0);
  auto shifted = cube_vertices(3);
  for (auto& v : shifted) v[0] += 0.05;
  CHECK(approx_hausdorff(cube, convex_hull(shifted), 200) == doctest::Approx(0.05).epsilon(1e-9));

  std::vector<Point> square = {vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})};
  for (auto& v : square) v = Eigen::Rotation2D<double>(M_PI / 4).toRotationMatrix() * v;
  std::vector<Point> disk;
  for (int i = 0; i < 256; ++i) disk.push_back(vec({std::cos(2 * M_PI * i / 256), std::sin(2 * M_PI * i / 256)}));
  const double h = approx_hausdorff(convex_hull(square), convex_hull(disk), 720);
  CHECK(h <= 1.0 - std::sqrt(2.0) / 2.0 + 0.01);
  CHECK(h > 0.25);
}
