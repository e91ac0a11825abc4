#include "hypercross/constants.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "hypercross/errors.hpp"
#include "hypercross/geometry.hpp"
#include "hypercross/parallel.hpp"

namespace hypercross {

double EstimateWithCI::half_width(double level) const {
  const boost::math::normal_distribution<double> z;
  return boost::math::quantile(z, 0.5 + level / 2.0) * std_error;
}

bool agree_within(const EstimateWithCI& a, const EstimateWithCI& b, double z) {
  return std::fabs(a.value - b.value) <=
         z * std::hypot(a.std_error, b.std_error);
}

double gamma_half_integer(double x) {
  const double twice = 2.0 * x;
  if (!(x > 0.0) || twice != std::round(twice) || twice > 340.0)
    throw DomainError("gamma_half_integer: argument must be k/2, k >= 1");
  const bool integer = std::fmod(twice, 2.0) == 0.0;
  double g = integer ? 1.0 : std::sqrt(M_PI);
  for (double y = integer ? 1.0 : 0.5; y < x; y += 1.0) g *= y;
  return g;
}

BallConstants ball_constants(int d) {
  if (d < 1) throw DomainError("ball_constants: d must be >= 1");
  const double kappa = std::pow(M_PI, d / 2.0) / gamma_half_integer(1.0 + d / 2.0);
  return {kappa, d * kappa};
}

double exact_c2() { return 4.0 / (3.0 * M_PI * M_PI); }

double gamma_d(int d, double c_d) {
  if (!(c_d > 0.0)) throw DomainError("gamma_d: C_d must be positive");
  return 0.5 * c_d * omega(d);
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Y = (u, z): u uniform on S^{m-2} in the first m-1 coordinates, z uniform on
// [-1, 1] in the last.
Point parallelotope_edge(int m, Rng& rng) {
  Point y(m);
  y.head(m - 1) = uniform_on_sphere(m - 1, rng);
  y[m - 1] = rng.uniform(-1.0, 1.0);
  return y;
}

EstimateWithCI finish(const MomentAccumulator& acc, double scale,
                      std::uint64_t seed) {
  EstimateWithCI e;
  e.value = scale * acc.mean;
  e.std_error = scale * std::sqrt(acc.variance() / static_cast<double>(acc.n));
  e.n = acc.n;
  e.seed = seed;
  return e;
}

void check_samples(std::int64_t n) {
  if (n < 1) throw DomainError("sample count must be positive");
}

}  // namespace

EstimateWithCI estimate_cd(int d, std::int64_t n, std::uint64_t seed) {
  if (d < 2 || d > kMaxDim) throw DomainError("estimate_cd: d out of range");
  check_samples(n);
  const double scale =
      std::pow(2.0 * omega(d - 1) / omega(d), d) / factorial(d);
  auto acc = monte_carlo(n, seed, [d](Rng& rng) {
    std::array<Point, kMaxDim> y;
    for (int i = 0; i < d; ++i) y[i] = parallelotope_edge(d, rng);
    return subspace_determinant(std::span<const Point>(y.data(), d));
  });
  return finish(acc, scale, seed);
}

EstimateWithCI estimate_c2_constant(int m, double a, std::int64_t n,
                                    std::uint64_t seed) {
  if (m < 2 || m > kMaxDim)
    throw DomainError("estimate_c2_constant: m out of range");
  if (!(a >= 1.0)) throw DomainError("estimate_c2_constant: a must be >= 1");
  check_samples(n);
  const double scale = std::pow(2.0 * omega(m - 1) / omega(m), m);
  auto acc = monte_carlo(n, seed, [m, a](Rng& rng) {
    std::array<Point, kMaxDim> y;
    for (int i = 0; i < m; ++i) y[i] = parallelotope_edge(m, rng);
    return std::pow(abs_determinant(std::span<const Point>(y.data(), m)), a);
  });
  return finish(acc, scale, seed);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  struct Rec {
    const std::function<double(double)>& f;
    double operator()(double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (!std::isfinite(delta))
        throw DomainError("adaptive_simpson: integrand is not finite");
      // Below rounding level further splitting only chases noise.
      const double floor =
          64.0 * std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
      if (depth <= 0 || std::fabs(delta) <= std::max(15.0 * tol, floor) || !(a < m && m < b))
        return left + right + delta / 15.0;
      return (*this)(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
             (*this)(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  };
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}(a, b, fa, fm, fb, whole, tol, max_depth);
}

double band_probability(int sphere_dim, double h) {
  if (sphere_dim < 0) throw DomainError("band_probability: negative dimension");
  if (h < 0.0) return 0.0;
  if (h >= 1.0) return 1.0;
  switch (sphere_dim) {
    case 0:
      return 0.0;  // S^0 = {-1, 1}
    case 1:
      return 2.0 / M_PI * std::asin(h);
    case 2:
      return h;
    default:
      break;
  }
  // <u, e> has density proportional to (1 - y^2)^{(n-2)/2}; with y = sin(phi)
  // the integrand becomes cos^{n-1}(phi), smooth on the whole range.
  const int n = sphere_dim;
  const double integral = adaptive_simpson(
      [n](double phi) { return std::pow(std::cos(phi), n - 1); },
      -std::asin(h), std::asin(h), 1e-12);
  return omega(n) / omega(n + 1) * integral;
}

namespace {

void check_dk(int d, int k) {
  if (d < 2 || d > kMaxDim) throw DomainError("dimension out of range");
  if (k < 1 || k > d - 1) throw DomainError("k must be in 1..d-1");
}

}  // namespace

double intersection_norm_density(int d, int k, double s_f, double r) {
  check_dk(d, k);
  if (!(s_f > 0.0) || !(r > 0.0)) throw DomainError("s_F and r must be positive");
  if (r < s_f) return 0.0;
  const int m = d - k;
  const double q = 1.0 - (s_f * s_f) / (r * r);
  return 2.0 * omega(m) / omega(m + 1) * std::pow(q, (m - 2) / 2.0) * s_f /
         (r * r);
}

double intersection_norm_survival(int d, int k, double s_f, double r) {
  check_dk(d, k);
  if (!(s_f > 0.0) || !(r > 0.0)) throw DomainError("s_F and r must be positive");
  if (r <= s_f) return 1.0;
  return band_probability(d - k, s_f / r);
}

double sample_intersection_norm(int d, int k, double s_f, Rng& rng) {
  check_dk(d, k);
  if (!(s_f > 0.0)) throw DomainError("s_F must be positive");
  const int m = d - k;  // dimension of F
  // Unknowns (a, b): sum_i a_i e_i = theta (s_F e_d + sum_j b_j e_j),
  // i < k and j < m; the point on E_o is (a, 0).
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Rotation theta = random_rotation(d, rng);
    SmallMatrix sys(d, d);
    for (int i = 0; i < k; ++i) sys.col(i) = SmallMatrix::Identity(d, d).col(i);
    for (int j = 0; j < m; ++j) sys.col(k + j) = -theta.matrix.col(j);
    const Point rhs = s_f * theta.matrix.col(d - 1);
    Eigen::PartialPivLU<SmallMatrix> lu(sys);
    if (std::fabs(lu.determinant()) < 1e-12) continue;
    const Point sol = lu.solve(rhs);
    return sol.head(k).norm();
  }
  throw NearSingular("sample_intersection_norm: 100 near-parallel draws");
}

double limit_density(int d, double c_d, const Point& x) {
  const double r = x.norm();
  if (r == 0.0) throw DomainError("limit_density: x = 0");
  return c_d * std::pow(r, -(d + 1));
}

double annulus_mass(int d, double c_d, double r1, double r2) {
  if (!(r1 > 0.0)) throw DomainError("annulus_mass: r1 must be positive");
  if (!(r2 > r1)) throw DomainError("annulus_mass: need r1 < r2");
  const double inv2 = std::isinf(r2) ? 0.0 : 1.0 / r2;
  return c_d * omega(d) * (1.0 / r1 - inv2);
}

double exact_J_planar(double ratio) {
  const double w = 2.0 * std::asin(std::min(ratio, 1.0));
  return 2.0 * (w - std::sin(w)) / (M_PI * M_PI);
}

namespace {

// u uniform on S^{m-1} conditioned on |<u, e_m>| <= h, h in (0, 1].
Point band_direction(int m, double h, Rng& rng) {
  const double phi_max = std::asin(h);
  double y = 0.0;
  while (true) {
    const double phi = rng.uniform(-phi_max, phi_max);
    if (m == 2 || rng.uniform() < std::pow(std::cos(phi), m - 2)) {
      y = std::sin(phi);
      break;
    }
  }
  Point u(m);
  u.head(m - 1) = std::sqrt(1.0 - y * y) * uniform_on_sphere(m - 1, rng);
  u[m - 1] = y;
  return u;
}

}  // namespace

EstimateWithCI mc_estimate_J(int d, int k, double a, double ratio,
                             std::int64_t n, std::uint64_t seed,
                             JMethod method) {
  if (d < 2 || d > kMaxDim) throw DomainError("mc_estimate_J: d out of range");
  if (k < 0 || k > d - 2) throw DomainError("mc_estimate_J: k must be in 0..d-2");
  if (!(a >= k + 1)) throw DomainError("mc_estimate_J: need a >= k + 1");
  if (!(ratio > 0.0)) throw DomainError("mc_estimate_J: ratio must be positive");
  check_samples(n);
  const int m = d - k;
  // x_E = e_m; the hyperplane with normal u_i through x_E hits B_ratio iff
  // |<u_i, e_m>| <= ratio.
  if (method == JMethod::kDirect) {
    auto acc = monte_carlo(n, seed, [m, a, ratio](Rng& rng) {
      std::array<Point, kMaxDim> u;
      for (int i = 0; i < m; ++i) {
        u[i] = uniform_on_sphere(m, rng);
        if (std::fabs(u[i][m - 1]) > ratio) return 0.0;
      }
      return std::pow(abs_determinant(std::span<const Point>(u.data(), m)), a);
    });
    return finish(acc, 1.0, seed);
  }
  const double h = std::min(ratio, 1.0);
  const double p = band_probability(m - 1, h);
  auto acc = monte_carlo(n, seed, [m, a, h](Rng& rng) {
    std::array<Point, kMaxDim> u;
    for (int i = 0; i < m; ++i) u[i] = band_direction(m, h, rng);
    return std::pow(abs_determinant(std::span<const Point>(u.data(), m)), a);
  });
  return finish(acc, std::pow(p, m), seed);
}

double predicted_intensity_density(int d, double t, double radius, double c1,
                                   double c_d, const Point& x) {
  if (!(t > 0.0) || !(radius > 0.0))
    throw DomainError("predicted_intensity_density: t and R must be positive");
  const double r = x.norm();
  if (r == 0.0) throw DomainError("predicted_intensity_density: x = 0");
  const double td = std::pow(t, d);
  if (r < radius) return c1 / factorial(d) * td;
  return td * c_d * std::pow(radius / r, d + 1);
}

}  // namespace hypercross
