#pragma once

#include <optional>
#include <span>

#include "hypercross/rng.hpp"
#include "hypercross/types.hpp"

namespace hypercross {

/// Gram determinant of the normals below which a d-tuple of hyperplanes is
/// treated as not being in general position.
inline constexpr double kSingularGramTol = 1e-12;

/// Affine hyperplane {x : <normal, x> = offset} in canonical form:
/// unit normal, offset >= 0, and for offset == 0 the first nonzero
/// coordinate of the normal is positive.
struct Hyperplane {
  Point normal;
  double offset = 0.0;

  /// Normalizes an arbitrary (normal, offset) pair. Throws DomainError for a
  /// zero normal.
  static Hyperplane canonical(const Point& normal, double offset);

  int dim() const { return static_cast<int>(normal.size()); }
  double signed_distance(const Point& x) const {
    return normal.dot(x) - offset;
  }
  /// True when the plane hits the centred ball of the given radius.
  bool hits_ball(double radius) const { return offset <= radius; }
};

/// Unique common point of d hyperplanes in R^d. Throws NearSingular when the
/// normals are not in general position or the solve leaves a residual above
/// tol * (1 + |x|).
Point intersect_hyperplanes(std::span<const Hyperplane> planes,
                            double tol = 1e-9);

/// Non-throwing variant used by the enumeration kernels; nullopt marks a
/// degenerate tuple.
std::optional<Point> try_intersect_hyperplanes(
    std::span<const Hyperplane> planes, double tol = 1e-9);

/// l-volume of the parallelepiped spanned by the vectors, sqrt(det Gram).
/// Degenerate input yields 0. Works for unnormalized vectors as well.
double subspace_determinant(std::span<const Point> vectors);

/// |det| of a square matrix whose columns are the vectors (l == d only).
double abs_determinant(std::span<const Point> vectors);

struct Rotation {
  SmallMatrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  Point apply(const Point& x) const { return matrix * x; }
};

/// Haar-distributed element of SO(d): QR of a standard Gaussian matrix with
/// the diagonal of R made positive, then one column flipped if det = -1.
Rotation random_rotation(int d, Rng& rng);

/// Uniform point on the unit sphere S^{d-1} (normalized Gaussian vector).
Point uniform_on_sphere(int d, Rng& rng);

}  // namespace hypercross
