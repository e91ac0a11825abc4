#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hypercross/constants.hpp"
#include "hypercross/errors.hpp"
#include "hypercross/statistics.hpp"

using namespace hypercross;

namespace {

// Independent quadrature oracle (double-exponential rules from Boost).
double integrate(const std::function<double(double)>& f, double a, double b) {
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double x) { return f(a + x); });
  }
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

Point radial(int d, double r) {
  Point x = Point::Zero(d);
  x[0] = r;
  return x;
}

}  // namespace

TEST_CASE("gamma at half-integers") {
  CHECK(gamma_half_integer(0.5) == doctest::Approx(std::sqrt(M_PI)));
  CHECK(gamma_half_integer(1.0) == 1.0);
  CHECK(gamma_half_integer(5.0) == 24.0);
  for (int k = 1; k < 40; ++k)
    CHECK(gamma_half_integer(k / 2.0) == doctest::Approx(std::tgamma(k / 2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_half_integer(0.3), DomainError);
  CHECK_THROWS_AS(gamma_half_integer(0.0), DomainError);
}

TEST_CASE("ball constants") {
  CHECK(ball_constants(1).kappa == doctest::Approx(2.0));
  CHECK(ball_constants(1).omega == doctest::Approx(2.0));
  CHECK(ball_constants(2).kappa == doctest::Approx(M_PI));
  CHECK(ball_constants(2).omega == doctest::Approx(2 * M_PI));
  CHECK(ball_constants(3).kappa == doctest::Approx(4 * M_PI / 3));
  CHECK(ball_constants(3).omega == doctest::Approx(4 * M_PI));
  for (int d = 1; d <= 8; ++d) CHECK(omega(d) == doctest::Approx(d * kappa(d)));
}

TEST_CASE("C_2 closed form and Monte Carlo") {
  CHECK(exact_c2() == doctest::Approx(0.135095).epsilon(1e-5));
  CHECK(exact_c2() == doctest::Approx(0.5 * std::pow(2 / M_PI, 2) * (2.0 / 3.0)));
  const auto e = estimate_cd(2, 1'000'000, 1);
  CHECK(std::fabs(e.value - exact_c2()) <= 3.0 * e.std_error);
  CHECK(e.std_error < 4e-4);
  // The d = 2 integrand is |z1 - z2| up to the prefactor (2/pi)^2 / 2.
  CHECK(e.value / (0.5 * std::pow(2 / M_PI, 2)) == doctest::Approx(2.0 / 3.0).epsilon(0.005));
}

TEST_CASE("C_3 self-consistency and golden value") {
  const auto a = estimate_cd(3, 2'000'000, 2);
  const auto b = estimate_cd(3, 2'000'000, 3);
  CHECK(agree_within(a, b));
  CHECK(a.std_error / a.value < 0.005);
  // Regression fixture: estimate_cd(3, 10^7, seed 20240531) = 0.0930982 +- 2.3e-5.
  CHECK(std::fabs(a.value - 0.0930982) <= 3.0 * std::hypot(a.std_error, 2.3e-5));
}

TEST_CASE("C^(2)_{m,1} = m! C_m by two routes") {
  for (int m : {2, 3, 4}) {
    CAPTURE(m);
    const auto c2 = estimate_c2_constant(m, 1.0, 1'000'000, 10 + m);
    const auto cd = estimate_cd(m, 1'000'000, 20 + m);
    const double f = std::tgamma(m + 1.0);
    CHECK(agree_within(c2, EstimateWithCI{f * cd.value, f * cd.std_error, cd.n, cd.seed}));
  }
  const auto e = estimate_c2_constant(2, 1.0, 1'000'000, 31);
  CHECK(std::fabs(e.value - 8.0 / (3.0 * M_PI * M_PI)) <= 3.0 * e.std_error);
  const auto p = estimate_c2_constant(2, 3.0, 500'000, 32);
  const auto q = estimate_c2_constant(2, 3.0, 500'000, 33);
  CHECK(agree_within(p, q));
}

TEST_CASE("gamma_d") {
  CHECK(gamma_d(2, exact_c2()) == doctest::Approx(4.0 / (3.0 * M_PI)));
  CHECK(gamma_d(3, 0.2) == doctest::Approx(2.0 * gamma_d(3, 0.1)));
  for (int d = 2; d <= 6; ++d) CHECK(gamma_d(d, estimate_cd(d, 20'000, d).value) > 0.0);
  CHECK_THROWS_AS(gamma_d(2, 0.0), DomainError);
}

TEST_CASE("adaptive simpson against Boost quadrature") {
  auto f = [](double x) { return std::exp(-x) * std::sin(3 * x); };
  CHECK(adaptive_simpson(f, 0.0, 5.0) == doctest::Approx(integrate(f, 0.0, 5.0)).epsilon(1e-10));
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0), DomainError);
  auto g = [](double phi) { return std::pow(std::cos(phi), 4); };
  CHECK(adaptive_simpson(g, -M_PI / 2, M_PI / 2) == doctest::Approx(3 * M_PI / 8).epsilon(1e-10));
}

TEST_CASE("band probability closed forms and quadrature") {
  CHECK(band_probability(1, 0.5) == doctest::Approx(2 / M_PI * std::asin(0.5)));
  CHECK(band_probability(2, 0.3) == doctest::Approx(0.3));
  CHECK(band_probability(5, 1.0) == 1.0);
  CHECK(band_probability(5, 0.0) == 0.0);
  for (int n = 3; n <= 7; ++n) {
    const double h = 0.37;
    auto dens = [n](double y) { return std::pow(1 - y * y, (n - 2) / 2.0); };
    const double oracle = omega(n) / omega(n + 1) * integrate(dens, -h, h);
    CHECK(band_probability(n, h) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("intersection-norm density examples and normalisation") {
  CHECK(intersection_norm_density(3, 1, 1.0, 2.0) == doctest::Approx(0.25));
  CHECK(intersection_norm_density(3, 1, 1.0, 0.5) == 0.0);
  CHECK_THROWS_AS(intersection_norm_density(3, 3, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(intersection_norm_density(3, 0, 1.0, 2.0), DomainError);
  Rng rng(40, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 5;
    const int k = 1 + static_cast<int>(rng.uniform() * (d - 1));
    const double s = 0.2 + 2.0 * rng.uniform();
    CAPTURE(d);
    CAPTURE(k);
    // tanh-sinh copes with the integrable endpoint singularity at d - k = 1
    auto f = [&](double r) { return intersection_norm_density(d, k, s, r); };
    const double mass = integrate(f, s, 2 * s) + integrate(f, 2 * s, INFINITY);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("intersection-norm survival") {
  CHECK(intersection_norm_survival(3, 1, 1.0, 1.0) == 1.0);
  CHECK(intersection_norm_survival(3, 1, 1.0, 0.5) == 1.0);
  CHECK(intersection_norm_survival(3, 1, 1.0, 2.0) == doctest::Approx(0.5));
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k < d; ++k)
      for (double r : {1.1, 2.0, 7.0, 50.0}) {
        const int m = d - k;
        // For m >= 2 the band density is at most omega_m / omega_{m+1}; for
        // m = 1 it is at least that.
        const double linear = 2.0 * omega(m) / omega(m + 1) / r;
        if (m >= 2)
          CHECK(intersection_norm_survival(d, k, 1.0, r) <= linear + 1e-12);
        else
          CHECK(intersection_norm_survival(d, k, 1.0, r) >= linear - 1e-12);
        // survival = integral of the density beyond r
        const double tail = integrate(
            [&](double x) { return intersection_norm_density(d, k, 1.0, x); }, r,
            INFINITY);
        CHECK(intersection_norm_survival(d, k, 1.0, r) == doctest::Approx(tail).epsilon(1e-7));
      }
}

TEST_CASE("sampled intersection norms follow the analytic law") {
  const std::pair<int, int> cases[] = {{2, 1}, {3, 1}, {3, 2}, {4, 2}};
  for (auto [d, k] : cases) {
    CAPTURE(d);
    CAPTURE(k);
    Rng rng(50 + d, k);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) {
      xs.push_back(sample_intersection_norm(d, k, 1.5, rng));
      REQUIRE(xs.back() >= 1.5 * (1 - 1e-9));
    }
    const auto ks = ks_test(xs, [&](double r) {
      return r <= 1.5 ? 0.0 : 1.0 - intersection_norm_survival(d, k, 1.5, r);
    });
    CHECK(ks.p_value > 0.01);
    if (d - k == 2) {
      std::nth_element(xs.begin(), xs.begin() + 50000, xs.end());
      CHECK(xs[50000] == doctest::Approx(3.0).epsilon(0.02));
    }
  }
}

TEST_CASE("limit density and annulus mass") {
  const double c2 = exact_c2();
  CHECK(limit_density(2, c2, radial(2, 1.0)) == doctest::Approx(c2));
  CHECK(limit_density(3, 0.1, radial(3, 0.4)) ==
        doctest::Approx(limit_density(3, 0.1, radial(3, 0.2)) / 16.0));
  CHECK_THROWS_AS(limit_density(2, c2, Point::Zero(2)), DomainError);
  CHECK(annulus_mass(2, c2, 0.1, INFINITY) == doctest::Approx(8.488).epsilon(1e-3));
  for (int d = 2; d <= 4; ++d) {
    // u = 1 / r keeps the oracle on a finite interval; mass beyond r = 1e12 is negligible
    const double radial_int = integrate(
        [&](double u) {
          const double r = 1.0 / u;
          return omega(d) * std::pow(r, d - 1) * limit_density(d, 0.3, radial(d, r)) / (u * u);
        },
        1e-12, 10.0);
    CHECK(annulus_mass(d, 0.3, 0.1, INFINITY) == doctest::Approx(radial_int).epsilon(1e-8));
  }
  CHECK(std::fabs(annulus_mass(2, c2, 0.1, 0.3) + annulus_mass(2, c2, 0.3, 0.7) -
                  annulus_mass(2, c2, 0.1, 0.7)) < 1e-12);
  CHECK_THROWS_AS(annulus_mass(2, c2, 0.0, 1.0), DomainError);
}

TEST_CASE("exact planar J: limits") {
  CHECK(exact_J_planar(1.5) == doctest::Approx(2 / M_PI));
  CHECK(exact_J_planar(1.0) == doctest::Approx(2 / M_PI));
  const double rho = 1e-3;
  CHECK(exact_J_planar(rho) / std::pow(rho, 3) == doctest::Approx(2 * exact_c2()).epsilon(1e-5));
}

TEST_CASE("J estimators agree with the planar closed form") {
  for (double ratio : {0.1, 0.5, 1.5}) {
    CAPTURE(ratio);
    const auto cond = mc_estimate_J(2, 0, 1.0, ratio, 400'000, 60);
    const auto direct = mc_estimate_J(2, 0, 1.0, ratio, 400'000, 61, JMethod::kDirect);
    CHECK(std::fabs(cond.value - exact_J_planar(ratio)) <= 3.0 * cond.std_error + 1e-12);
    CHECK(std::fabs(direct.value - exact_J_planar(ratio)) <= 3.0 * direct.std_error + 1e-12);
  }
}

TEST_CASE("J: the two estimators agree in higher dimension") {
  for (int d : {3, 4}) {
    for (double ratio : {0.3, 0.8}) {
      CAPTURE(d);
      CAPTURE(ratio);
      const auto a = mc_estimate_J(d, 0, 1.0, ratio, 400'000, 70 + d);
      const auto b = mc_estimate_J(d, 0, 1.0, ratio, 400'000, 80 + d, JMethod::kDirect);
      CHECK(agree_within(a, b));
    }
  }
  const auto a = mc_estimate_J(4, 1, 2.0, 0.5, 300'000, 90);
  const auto b = mc_estimate_J(4, 1, 2.0, 0.5, 300'000, 91, JMethod::kDirect);
  CHECK(agree_within(a, b));
}

TEST_CASE("J is constant above ratio 1") {
  for (int d : {2, 3}) {
    const auto a = mc_estimate_J(d, 0, 1.0, 1.2, 500'000, 100 + d);
    const auto b = mc_estimate_J(d, 0, 1.0, 2.0, 500'000, 110 + d);
    const auto c = mc_estimate_J(d, 0, 1.0, 5.0, 500'000, 120 + d);
    CHECK(agree_within(a, b));
    CHECK(agree_within(b, c));
    CHECK(agree_within(a, c));
  }
}

TEST_CASE("J small-ratio asymptotics") {
  const double rho = 0.05;
  {
    const auto j = mc_estimate_J(2, 0, 1.0, rho, 1'000'000, 130);
    const double v = j.value / std::pow(rho, 3), se = j.std_error / std::pow(rho, 3);
    CHECK(std::fabs(v - 2 * exact_c2()) <= std::max(0.01 * 2 * exact_c2(), 3 * se));
  }
  {
    const auto j = mc_estimate_J(3, 0, 1.0, rho, 1'000'000, 131);
    const auto c3 = estimate_cd(3, 2'000'000, 132);
    const double v = j.value / std::pow(rho, 4), se = j.std_error / std::pow(rho, 4);
    CHECK(std::fabs(v - 6 * c3.value) <= std::max(0.01 * 6 * c3.value, 3 * std::hypot(se, 6 * c3.std_error)));
  }
  CHECK_THROWS_AS(mc_estimate_J(3, 2, 3.0, 0.5, 10, 1), DomainError);
  CHECK_THROWS_AS(mc_estimate_J(3, 1, 1.0, 0.5, 10, 1), DomainError);
}

TEST_CASE("predicted intensity density") {
  const double c2 = exact_c2();
  // t^d R^(d+1) = 1 with R = t^(-d/(d+1)), so the outer branch is t-free.
  for (int d : {2, 3}) {
    for (double t : {1e3, 1e5, 1e7}) {
      const double r = std::pow(t, -static_cast<double>(d) / (d + 1));
      CHECK(std::fabs(std::pow(t, d) * std::pow(r, d + 1) - 1.0) < 1e-12);
      CHECK(predicted_intensity_density(d, t, r, 0.6, 0.1, radial(d, 0.3)) ==
            doctest::Approx(limit_density(d, 0.1, radial(d, 0.3))).epsilon(1e-12));
    }
  }
  const double t = 1e4, r = std::pow(t, -2.0 / 3.0), c1 = 2 / M_PI;
  const double inside = predicted_intensity_density(2, t, r, c1, c2, radial(2, 0.999 * r));
  const double outside = predicted_intensity_density(2, t, r, c1, c2, radial(2, r));
  CHECK(inside - outside == doctest::Approx(t * t * (c1 / 2 - c2)));
  CHECK_THROWS_AS(predicted_intensity_density(2, t, r, c1, c2, Point::Zero(2)), DomainError);
}
