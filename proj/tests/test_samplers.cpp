#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypercross/constants.hpp"
#include "hypercross/errors.hpp"
#include "hypercross/parallel.hpp"
#include "hypercross/samplers.hpp"
#include "hypercross/statistics.hpp"

using namespace hypercross;

namespace {

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

bool same_points(const PointSample& a, const PointSample& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    if (a.points[i] != b.points[i]) return false;
  return a.meta.skipped_tuples == b.meta.skipped_tuples;
}

}  // namespace

TEST_CASE("hit measure of B_R is 2R: numeric integration oracle") {
  // Under the (u, s) parametrisation with u uniform on the half sphere and
  // s >= 0, mu([B_R]) = integral over u of integral_0^R ds = R * mass(half
  // sphere) with the normalisation mu([B^1]) = 2 = kappa_1, i.e. 2R.
  const double r = 0.01;
  const double mass = adaptive_simpson([](double) { return 2.0; }, 0.0, r, 1e-14);
  CHECK(mass == doctest::Approx(2.0 * r));
  CHECK(2.0 * 1000.0 * std::pow(1000.0, -2.0 / 3.0) == doctest::Approx(20.0));
}

TEST_CASE("poisson hyperplane count mean") {
  for (int d : {2, 3}) {
    const double t = 1000.0, r = std::pow(t, -static_cast<double>(d) / (d + 1));
    const auto ns = replicate<double>(10000, 77 + d, [&](Rng& rng, std::int64_t) {
      return static_cast<double>(sample_poisson_hyperplanes(t, r, d, rng).planes.size());
    });
    const auto e = mean_with_ci(ns);
    CHECK(std::fabs(e.value - 2 * t * r) <= 3.0 * std::sqrt(2 * t * r / 1e4));
  }
  Rng rng(1, 0);
  double total = 0;
  for (int i = 0; i < 1000; ++i) total += sample_poisson_hyperplanes(1.0, 1e-6, 2, rng).planes.size();
  CHECK(total < 10);
}

TEST_CASE("planes hit the ball and are canonical") {
  Rng rng(2, 0);
  for (int d = 2; d <= 5; ++d) {
    const auto h = sample_poisson_hyperplanes(500.0, 0.05, d, rng);
    for (const auto& p : h.planes) {
      REQUIRE(p.offset >= 0.0);
      REQUIRE(p.offset <= h.radius);
      REQUIRE(std::fabs(p.normal.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("binomial planes: exact count, uniform offsets") {
  Rng rng(3, 0);
  CHECK(sample_binomial_hyperplanes(0, 1.0, 2, rng).planes.empty());
  const auto h = sample_binomial_hyperplanes(100000, 0.5, 3, rng);
  CHECK(h.planes.size() == 100000);
  std::vector<double> offsets;
  for (const auto& p : h.planes) offsets.push_back(p.offset);
  const auto ks = ks_test(offsets, [](double s) { return std::clamp(s / 0.5, 0.0, 1.0); });
  CHECK(ks.p_value > 0.01);
  CHECK_THROWS_AS(sample_binomial_hyperplanes(-1, 1.0, 2, rng), DomainError);
}

TEST_CASE("intersection process: counts") {
  HyperplaneSample three;
  three.dim = 2;
  three.radius = 2.0;
  three.planes = {{vec({1, 0}), 1.0}, {vec({0, 1}), 1.0},
                  {vec({1, 1}) / std::sqrt(2.0), 0.5}};
  CHECK(intersection_process(three).points.size() == 3);

  Rng rng(4, 0);
  HyperplaneSample five;
  five.dim = 3;
  five.radius = 1.0;
  for (int i = 0; i < 5; ++i)
    five.planes.push_back(Hyperplane::canonical(uniform_on_sphere(3, rng), rng.uniform()));
  CHECK(intersection_process(five).points.size() == 10);

  HyperplaneSample parallel = three;
  parallel.planes.push_back({vec({1, 0}), 0.3});
  const auto s = intersection_process(parallel);
  CHECK(s.meta.skipped_tuples == 1);
  CHECK(s.points.size() + s.meta.skipped_tuples == binomial_coefficient(4, 2));
}

TEST_CASE("intersection points lie on their planes (lexicographic order)") {
  Rng rng(5, 0);
  const auto h = sample_poisson_hyperplanes(3000.0, 0.003, 3, rng);
  const auto s = intersection_process_serial(h);
  std::size_t idx = 0;
  const int n = static_cast<int>(h.planes.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        REQUIRE(idx < s.points.size());
        const Point& x = s.points[idx++];
        for (int m : {i, j, k})
          REQUIRE(std::fabs(h.planes[m].signed_distance(x)) <= 1e-9 * (1.0 + x.norm()));
      }
  CHECK(idx == s.points.size());
}

TEST_CASE("parallel and serial enumeration agree bit for bit") {
  for (int d = 2; d <= 4; ++d) {
    Rng rng(6, d);
    const auto h = sample_poisson_hyperplanes(d == 2 ? 1e5 : 3000.0,
                                              d == 2 ? 1e-3 : 0.01, d, rng);
    CHECK(same_points(intersection_process(h), intersection_process_serial(h)));
  }
}

TEST_CASE("expected number of intersection points at t = 30000") {
  const double t = 30000.0, r = std::pow(t, -2.0 / 3.0);
  const auto counts = replicate<double>(2000, 8, [&](Rng& rng, std::int64_t) {
    return static_cast<double>(intersection_process(sample_poisson_hyperplanes(t, r, 2, rng)).points.size());
  });
  const auto e = mean_with_ci(counts);
  const double target = std::pow(2 * t * r, 2) / 2.0;
  CHECK(target == doctest::Approx(1931).epsilon(0.01));
  CHECK(std::fabs(e.value - target) <= 3.0 * e.std_error);
}

TEST_CASE("tuple budget") {
  Rng rng(9, 0);
  const auto h = sample_binomial_hyperplanes(200, 1.0, 3, rng);
  CHECK_THROWS_AS(intersection_process(h, 1000), TupleBudgetExceeded);
  CHECK(binomial_coefficient(200, 3) == 1313400);
  CHECK(binomial_coefficient(5, 7) == 0);
  CHECK(binomial_coefficient(100000, 50) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("scale equivariance") {
  Rng rng(10, 0);
  const auto h = sample_poisson_hyperplanes(5000.0, 0.002, 3, rng);
  HyperplaneSample g = h;
  for (auto& p : g.planes) p.offset *= 2.5;
  g.radius *= 2.5;
  const auto a = intersection_process(h), b = intersection_process(g);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    REQUIRE((2.5 * a.points[i] - b.points[i]).norm() <= 1e-9 * (1.0 + b.points[i].norm()));
}

TEST_CASE("limit process: mean count, radial law, directions") {
  const double c2 = exact_c2();
  CHECK(c2 * omega(2) / 0.1 == doctest::Approx(8.488).epsilon(1e-3));
  const auto ns = replicate<double>(10000, 11, [&](Rng& rng, std::int64_t) {
    return static_cast<double>(sample_limit_process(2, c2, 0.1, rng).points.size());
  });
  const auto e = mean_with_ci(ns);
  CHECK(std::fabs(e.value - c2 * omega(2) / 0.1) <= 3.0 * std::sqrt(8.488 / 1e4));

  Rng rng(12, 0);
  std::vector<double> radii;
  std::vector<std::int64_t> sectors(16, 0);
  while (radii.size() < 100000) {
    for (const auto& p : sample_limit_process(2, c2, 0.1, rng).points) {
      REQUIRE(p.norm() >= 0.1);
      radii.push_back(p.norm());
      double a = std::atan2(p[1], p[0]);
      if (a < 0) a += 2 * M_PI;
      ++sectors[std::min(15, static_cast<int>(a / (2 * M_PI) * 16))];
    }
  }
  CHECK(ks_test(radii, [](double x) { return x < 0.1 ? 0.0 : 1.0 - 0.1 / x; }).p_value > 0.01);
  // chi-square against the uniform sector law via a large synthetic reference
  std::vector<std::int64_t> uniform(16, static_cast<std::int64_t>(radii.size()));
  CHECK(chi_square_two_sample(sectors, uniform).p_value > 0.01);
}

TEST_CASE("limit process: restriction matches direct sampling") {
  const double c3 = 0.0931;
  Rng a(13, 0), b(13, 1);
  std::vector<double> restricted, direct;
  while (restricted.size() < 20000)
    for (const auto& p : restrict_to_exterior(sample_limit_process(3, c3, 0.05, a), 0.2).points)
      restricted.push_back(p.norm());
  while (direct.size() < 20000)
    for (const auto& p : sample_limit_process(3, c3, 0.2, b).points) direct.push_back(p.norm());
  CHECK(ks_test(restricted, direct).p_value > 0.01);
}

TEST_CASE("zero cell: contains the origin, vertices feasible") {
  Rng rng(14, 0);
  for (int d = 2; d <= 4; ++d) {
    for (int i = 0; i < 50; ++i) {
      const Polytope z = sample_zero_cell(d, 1.0, rng);
      REQUIRE(z.max_violation(Point::Zero(d)) < 0.0);
      REQUIRE(z.f_vector().satisfies_euler());
      for (const auto& v : z.vertices())
        for (const auto& f : z.facets()) REQUIRE(f.normal.dot(v) - f.offset <= 1e-9 * (1.0 + v.norm()));
    }
  }
}

TEST_CASE("zero cell in the plane: E f0 = pi^2/2") {
  const double gamma = 4.0 / (3.0 * M_PI);
  CHECK(gamma_d(2, exact_c2()) == doctest::Approx(gamma));
  const auto f0 = replicate<double>(100000, 15, [&](Rng& rng, std::int64_t) {
    return static_cast<double>(sample_zero_cell(2, gamma, rng).f_vector()[0]);
  });
  const auto e = mean_with_ci(f0);
  CHECK(std::fabs(e.value / (M_PI * M_PI / 2) - 1.0) < 0.02);
  CHECK(e.covers(M_PI * M_PI / 2));
}

TEST_CASE("zero cell: f0 is scale invariant in gamma") {
  // Same uniforms, different gamma: the cell is exactly rescaled.
  Rng a(16, 0), b(16, 0);
  for (int i = 0; i < 20; ++i) {
    const auto za = sample_zero_cell(3, 1.0, a);
    const auto zb = sample_zero_cell(3, 4.0, b);
    CHECK(za.f_vector() == zb.f_vector());
  }
}

TEST_CASE("zero cell without doublings: enclosed or Unbounded, nothing else") {
  Rng rng(17, 0);
  int unbounded = 0;
  for (int i = 0; i < 500; ++i) {
    try {
      const Polytope z = sample_zero_cell(2, 1.0, rng, 0);
      REQUIRE(z.scale() <= 8.0);
    } catch (const Unbounded&) {
      ++unbounded;
    }
  }
  CHECK(unbounded < 50);
  CHECK_THROWS_AS(sample_zero_cell(2, -1.0, rng), DomainError);
}

TEST_CASE("samples are a pure function of (seed, replication)") {
  const auto run = [](std::uint64_t seed) {
    return replicate<PointSample>(50, seed, [](Rng& rng, std::int64_t) {
      return intersection_process(sample_poisson_hyperplanes(2e4, 0.001357, 2, rng));
    });
  };
  const auto a = run(123), b = run(123), c = run(124);
  bool equal_ab = true, equal_ac = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    equal_ab &= same_points(a[i], b[i]);
    equal_ac &= same_points(a[i], c[i]);
  }
  CHECK(equal_ab);
  CHECK_FALSE(equal_ac);
}

TEST_CASE("SimConfig validation and radius rule") {
  SimConfig c;
  c.dim = 2;
  c.intensity = 1000.0;
  CHECK(c.radius() == doctest::Approx(0.01));
  c.dim = 3;
  CHECK(c.radius() == doctest::Approx(std::pow(1000.0, -0.75)));
  const double td = std::pow(c.intensity, 3) * std::pow(c.radius(), 4);
  CHECK(std::fabs(td - 1.0) < 1e-12);
  c.r_min = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.r_min = 1e-5;
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(c.validate_for_limit_comparison(), ConfigError);
}
