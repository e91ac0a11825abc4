#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypercross/geometry.hpp"
#include "hypercross/polytope.hpp"
#include "hypercross/rng.hpp"

namespace hypercross {

/// Default cap on C(N, d) for intersection enumeration.
inline constexpr std::uint64_t kDefaultTupleCap = 10'000'000;

/// Realization of a hyperplane process restricted to the planes hitting B_R.
struct HyperplaneSample {
  int dim = 2;
  double radius = 0.0;
  std::vector<Hyperplane> planes;
  std::uint64_t skipped_tuples = 0;
};

struct SampleMeta {
  double intensity = 0.0;  // t; 0 when not applicable
  double radius = 0.0;     // R; 0 when not applicable
  double r_min = 0.0;      // truncation radius of limit-process samples
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t skipped_tuples = 0;
};

/// Realization of a finite point process.
struct PointSample {
  int dim = 2;
  std::vector<Point> points;
  SampleMeta meta;
};

/// Simulation parameters shared by the experiments and the CLI.
struct SimConfig {
  int dim = 2;
  double intensity = 1000.0;
  double radius_exponent = -1.0;  // < 0 selects the default d/(d+1)
  double r_min = 0.1;
  std::int64_t reps = 1000;
  std::uint64_t master_seed = 20240531;
  std::uint64_t tuple_cap = kDefaultTupleCap;

  double effective_radius_exponent() const {
    return radius_exponent < 0.0 ? static_cast<double>(dim) / (dim + 1)
                                 : radius_exponent;
  }
  /// R = t^(-radius_exponent)
  double radius() const;
  /// Throws ConfigError on invalid values.
  void validate() const;
  /// Limit comparisons additionally need R < r_min.
  void validate_for_limit_comparison() const;
  /// Canonical key=value rendering, used for hashing and reports.
  std::string canonical() const;
};

/// Poisson(2 t R) planes with uniform unit normal and offset uniform on
/// [0, R]; this is t * mu_{d-1} restricted to [B_R] with mu_{d-1}([B_R]) = 2R.
HyperplaneSample sample_poisson_hyperplanes(double t, double radius, int dim,
                                            Rng& rng);

/// Exactly n i.i.d. planes, each uniform on the hit set of B_R.
HyperplaneSample sample_binomial_hyperplanes(std::int64_t n, double radius,
                                             int dim, Rng& rng);

/// Number of d-subsets of n items; saturates at UINT64_MAX.
std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t k);

/// One point per non-degenerate d-subset of planes, in lexicographic subset
/// order; degenerate subsets are counted in meta.skipped_tuples. Parallel over
/// the first plane index. Throws TupleBudgetExceeded if C(N, d) > cap.
PointSample intersection_process(const HyperplaneSample& h,
                                 std::uint64_t cap = kDefaultTupleCap);

/// Serial reference for intersection_process(); identical output.
PointSample intersection_process_serial(const HyperplaneSample& h,
                                        std::uint64_t cap = kDefaultTupleCap);

/// Poisson process with density C_d |x|^{-(d+1)} restricted to |x| >= r_min:
/// Poisson(C_d omega_d / r_min) points, radius r_min / (1 - U), uniform
/// direction.
PointSample sample_limit_process(int dim, double c_d, double r_min, Rng& rng);

/// Points of a sample with norm >= radius.
PointSample restrict_to_exterior(const PointSample& s, double radius);

/// Zero cell of the isotropic Poisson hyperplane tessellation of intensity
/// gamma (hit measure 2 gamma R). Planes hitting B_{R0}, R0 = 4d / gamma, are
/// sampled first; while the cell is not enclosed in the current ball, planes
/// hitting the next shell [R, 2R] are added and R doubles. Throws Unbounded
/// after max_doublings failed doublings.
Polytope sample_zero_cell(int dim, double gamma, Rng& rng,
                          int max_doublings = 10);

}  // namespace hypercross
