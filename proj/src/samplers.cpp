#include "hypercross/samplers.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <omp.h>

#include "hypercross/errors.hpp"

namespace hypercross {

double SimConfig::radius() const {
  return std::pow(intensity, -effective_radius_exponent());
}

void SimConfig::validate() const {
  if (dim < 2 || dim > kMaxDim)
    throw ConfigError("dim must be in 2.." + std::to_string(kMaxDim));
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw ConfigError("intensity must be positive and finite");
  if (radius_exponent >= 0.0 && !(radius_exponent > 0.0))
    throw ConfigError("radius exponent must be positive");
  if (!(r_min > 0.0) || !std::isfinite(r_min))
    throw ConfigError("r_min must be positive");
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (tuple_cap < 1) throw ConfigError("cap must be at least 1");
}

void SimConfig::validate_for_limit_comparison() const {
  validate();
  if (!(radius() < r_min))
    throw ConfigError("limit comparison needs R = t^-e < r_min");
}

std::string SimConfig::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "dim=" << dim << '\n'
     << "intensity=" << intensity << '\n'
     << "radius_exponent=" << effective_radius_exponent() << '\n'
     << "rmin=" << r_min << '\n'
     << "reps=" << reps << '\n'
     << "seed=" << master_seed << '\n'
     << "cap=" << tuple_cap << '\n';
  return os.str();
}

namespace {

Hyperplane random_plane(int dim, double lo, double hi, Rng& rng) {
  Point u = uniform_on_sphere(dim, rng);
  return Hyperplane::canonical(u, rng.uniform(lo, hi));
}

void append_planes(std::vector<Hyperplane>& out, std::uint64_t n, int dim,
                   double lo, double hi, Rng& rng) {
  out.reserve(out.size() + n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // uniform() is on [0, 1), so the offset never exceeds hi; canonical()
    // leaves a positive offset untouched.
    out.push_back(random_plane(dim, lo, hi, rng));
  }
}

void check_dim(int dim) {
  if (dim < 2 || dim > kMaxDim)
    throw DomainError("dimension must be in 2.." + std::to_string(kMaxDim));
}

}  // namespace

HyperplaneSample sample_poisson_hyperplanes(double t, double radius, int dim,
                                            Rng& rng) {
  check_dim(dim);
  if (!(t > 0.0) || !(radius > 0.0))
    throw DomainError("intensity and radius must be positive");
  HyperplaneSample s;
  s.dim = dim;
  s.radius = radius;
  append_planes(s.planes, rng.poisson(2.0 * t * radius), dim, 0.0, radius, rng);
  return s;
}

HyperplaneSample sample_binomial_hyperplanes(std::int64_t n, double radius,
                                             int dim, Rng& rng) {
  check_dim(dim);
  if (n < 0) throw DomainError("plane count must be nonnegative");
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  HyperplaneSample s;
  s.dim = dim;
  s.radius = radius;
  append_planes(s.planes, static_cast<std::uint64_t>(n), dim, 0.0, radius, rng);
  return s;
}

std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

struct Block {
  std::vector<Point> points;
  std::uint64_t skipped = 0;
};

// All d-subsets whose smallest index is `first`, in lexicographic order.
void enumerate_from(const std::vector<Hyperplane>& planes, int d, int first,
                    Block& out) {
  const int n = static_cast<int>(planes.size());
  std::array<Hyperplane, kMaxDim> tuple;
  tuple[0] = planes[first];
  if (d == 2) {
    for (int j = first + 1; j < n; ++j) {
      tuple[1] = planes[j];
      if (auto x = try_intersect_hyperplanes(std::span(tuple.data(), 2)))
        out.points.push_back(*x);
      else
        ++out.skipped;
    }
    return;
  }
  const int rest = d - 1;
  if (n - first - 1 < rest) return;
  std::array<int, kMaxDim> idx{};
  for (int i = 0; i < rest; ++i) idx[i] = first + 1 + i;
  while (true) {
    for (int i = 0; i < rest; ++i) tuple[i + 1] = planes[idx[i]];
    if (auto x = try_intersect_hyperplanes(std::span(tuple.data(), d)))
      out.points.push_back(*x);
    else
      ++out.skipped;
    int i = rest - 1;
    while (i >= 0 && idx[i] == n - rest + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < rest; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void check_budget(const HyperplaneSample& h, std::uint64_t cap) {
  const std::uint64_t tuples = binomial_coefficient(h.planes.size(), h.dim);
  if (tuples > cap) {
    throw TupleBudgetExceeded("C(" + std::to_string(h.planes.size()) + ", " +
                              std::to_string(h.dim) + ") = " +
                              std::to_string(tuples) + " exceeds cap " +
                              std::to_string(cap));
  }
}

PointSample assemble(const HyperplaneSample& h, std::vector<Block>& blocks) {
  PointSample out;
  out.dim = h.dim;
  out.meta.radius = h.radius;
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.points.size();
  out.points.reserve(total);
  std::uint64_t skipped = h.skipped_tuples;
  for (auto& b : blocks) {
    for (auto& p : b.points) out.points.push_back(std::move(p));
    skipped += b.skipped;
  }
  out.meta.skipped_tuples = skipped;
  return out;
}

}  // namespace

PointSample intersection_process(const HyperplaneSample& h, std::uint64_t cap) {
  check_budget(h, cap);
  const int n = static_cast<int>(h.planes.size());
  std::vector<Block> blocks(static_cast<std::size_t>(n));
  // Low first indices own the most subsets; dynamic scheduling balances that.
#pragma omp parallel for schedule(dynamic, 1) if (n > 64)
  for (int i = 0; i < n; ++i) enumerate_from(h.planes, h.dim, i, blocks[i]);
  return assemble(h, blocks);
}

PointSample intersection_process_serial(const HyperplaneSample& h,
                                        std::uint64_t cap) {
  check_budget(h, cap);
  const int n = static_cast<int>(h.planes.size());
  std::vector<Block> blocks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) enumerate_from(h.planes, h.dim, i, blocks[i]);
  return assemble(h, blocks);
}

PointSample sample_limit_process(int dim, double c_d, double r_min, Rng& rng) {
  check_dim(dim);
  if (!(c_d > 0.0) || !(r_min > 0.0))
    throw DomainError("C_d and r_min must be positive");
  const double omega = 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
  PointSample s;
  s.dim = dim;
  s.meta.r_min = r_min;
  s.meta.seed = rng.seed();
  s.meta.stream = rng.stream();
  const std::uint64_t n = rng.poisson(c_d * omega / r_min);
  s.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double rho = r_min / rng.uniform_open();
    s.points.push_back(rho * uniform_on_sphere(dim, rng));
  }
  return s;
}

PointSample restrict_to_exterior(const PointSample& s, double radius) {
  PointSample out;
  out.dim = s.dim;
  out.meta = s.meta;
  out.meta.r_min = std::max(s.meta.r_min, radius);
  for (const auto& p : s.points)
    if (p.norm() >= radius) out.points.push_back(p);
  return out;
}

Polytope sample_zero_cell(int dim, double gamma, Rng& rng, int max_doublings) {
  check_dim(dim);
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  double radius = 4.0 * dim / gamma;
  std::vector<Hyperplane> planes;
  append_planes(planes, rng.poisson(2.0 * gamma * radius), dim, 0.0, radius,
                rng);
  for (int attempt = 0;; ++attempt) {
    // Box faces at distance 2R keep the enumeration bounded; they cannot
    // touch a cell that fits inside B_R.
    std::vector<Hyperplane> constraints = planes;
    for (int j = 0; j < dim; ++j) {
      Point e = Point::Zero(dim);
      e[j] = 1.0;
      constraints.push_back(Hyperplane{e, 2.0 * radius});
      constraints.push_back(Hyperplane{-e, 2.0 * radius});
    }
    Polytope cell = polytope_from_halfspaces(dim, constraints);
    if (cell.scale() <= radius) return cell;
    if (attempt == max_doublings) {
      throw Unbounded("zero cell not enclosed after " +
                      std::to_string(max_doublings) + " doublings");
    }
    append_planes(planes, rng.poisson(2.0 * gamma * radius), dim, radius,
                  2.0 * radius, rng);
    radius *= 2.0;
  }
}

}  // namespace hypercross
