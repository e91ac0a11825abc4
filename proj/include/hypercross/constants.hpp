#pragma once

#include <cstdint>
#include <functional>

#include "hypercross/rng.hpp"
#include "hypercross/types.hpp"

namespace hypercross {

/// Monte Carlo output: mean, standard error of the mean, sample size, seed.
struct EstimateWithCI {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;

  /// Normal-approximation half-width at the given two-sided level.
  double half_width(double level = 0.99) const;
  double lower(double level = 0.99) const { return value - half_width(level); }
  double upper(double level = 0.99) const { return value + half_width(level); }
  bool covers(double x, double level = 0.99) const {
    return lower(level) <= x && x <= upper(level);
  }
};

/// |a - b| <= z * sqrt(se_a^2 + se_b^2)
bool agree_within(const EstimateWithCI& a, const EstimateWithCI& b,
                  double z = 3.0);

/// Gamma(x) for x a positive integer or half-integer, by recursion from
/// Gamma(1) = 1 and Gamma(1/2) = sqrt(pi). Throws DomainError otherwise.
double gamma_half_integer(double x);

struct BallConstants {
  double kappa;  // volume of the unit ball
  double omega;  // surface area of the unit sphere, d * kappa
};

BallConstants ball_constants(int d);
inline double kappa(int d) { return ball_constants(d).kappa; }
inline double omega(int d) { return ball_constants(d).omega; }

/// C_2 = 4 / (3 pi^2).
double exact_c2();

/// C_d = ((2 omega_{d-1} / omega_d)^d / d!) E|det(Y_1..Y_d)| with Y_i = (u_i,
/// z_i), u_i uniform on S^{d-2}, z_i uniform on [-1, 1]. The volume is taken
/// as a Gram (subspace) determinant.
EstimateWithCI estimate_cd(int d, std::int64_t n, std::uint64_t seed);

/// C^{(2)}_{m,a} = (2 omega_{m-1} / omega_m)^m E[|det(Y_1..Y_m)|^a], same Y as
/// above in dimension m. Uses a direct |det| rather than the Gram route.
EstimateWithCI estimate_c2_constant(int m, double a, std::int64_t n,
                                    std::uint64_t seed);

/// gamma_d = C_d omega_d / 2, the hyperplane intensity whose zero cell is
/// dual to the hull of the limit process.
double gamma_d(int d, double c_d);

/// P(|<u, e>| <= h) for u uniform on S^n and a fixed unit e. Closed forms for
/// n = 1, 2; adaptive quadrature otherwise.
double band_probability(int sphere_dim, double h);

/// Density in r of |theta E_o ∩ F| for a uniform rotation theta, a
/// k-dimensional linear subspace E_o and a (d-k)-flat F at distance s_F.
double intersection_norm_density(int d, int k, double s_f, double r);
/// The matching survival function P(|theta E_o ∩ F| >= r).
double intersection_norm_survival(int d, int k, double s_f, double r);
/// Direct simulation of the same norm: rotate F uniformly and solve for the
/// intersection point with E_o. Retries near-parallel draws up to 100 times.
double sample_intersection_norm(int d, int k, double s_f, Rng& rng);

/// C_d |x|^{-(d+1)}
double limit_density(int d, double c_d, const Point& x);
/// C_d omega_d (1/r1 - 1/r2); r2 may be +infinity.
double annulus_mass(int d, double c_d, double r1, double r2);

enum class JMethod {
  kConditional,  // draw directions inside the band, weight by band mass
  kDirect,       // draw uniform directions, multiply by the indicator
};

/// Monte Carlo J_{d,k,a} at s_E = 1 and R = ratio: with m = d - k directions
/// u_i uniform on S^{m-1} and a fixed unit x_E in the same space,
/// E[prod_i 1{|<u_i, x_E>| <= ratio} |det(u_1..u_m)|^a].
EstimateWithCI mc_estimate_J(int d, int k, double a, double ratio,
                             std::int64_t n, std::uint64_t seed,
                             JMethod method = JMethod::kConditional);

/// Exact J for d - k = 2 and a = 1 (directions on the circle), 2(w - sin w)/pi^2
/// with w = 2 asin(min(ratio, 1)).
double exact_J_planar(double ratio);

/// Leading-order intensity density of the restricted intersection process:
/// (C1 / d!) t^d inside B_R, t^d C_d (R / |x|)^{d+1} outside.
double predicted_intensity_density(int d, double t, double radius, double c1,
                                   double c_d, const Point& x);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 50);

}  // namespace hypercross
