#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypercross/geometry.hpp"
#include "hypercross/types.hpp"

namespace hypercross {

/// Supporting halfspace {x : <normal, x> <= offset} with unit outward normal.
struct Facet {
  Point normal;
  double offset = 0.0;
};

/// Face counts (f_0, ..., f_{d-1}).
struct FVector {
  std::vector<std::int64_t> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::int64_t operator[](int k) const { return counts[k]; }
  /// sum_k (-1)^k f_k
  std::int64_t alternating_sum() const;
  /// Euler relation for the boundary of a d-polytope: 1 - (-1)^d.
  bool satisfies_euler() const;
  /// (f_{d-1}, ..., f_0), the f-vector of the polar dual.
  FVector reversed() const;

  bool operator==(const FVector&) const = default;
};

/// Bounded full-dimensional polytope with its combinatorial face lattice.
///
/// Faces are stored as sorted vertex-index sets; faces(k) lists the k-faces in
/// lexicographic order, so two polytopes built from the same data compare
/// equal face by face.
class Polytope {
 public:
  using VertexSet = std::vector<int>;

  Polytope() = default;

  /// Builds the face lattice from vertex-facet incidence. facet_vertices[i]
  /// lists the vertices on facet i. A k-face is obtained as a maximal proper
  /// intersection of a (k+1)-face with a facet.
  static Polytope from_incidence(int dim, std::vector<Point> vertices,
                                 std::vector<Facet> facets,
                                 std::vector<VertexSet> facet_vertices);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  /// Vertices of facet i, aligned with facets().
  const VertexSet& facet_vertices(std::size_t i) const {
    return facet_vertices_[i];
  }
  const std::vector<VertexSet>& faces(int k) const { return faces_[k]; }

  FVector f_vector() const;

  /// max over vertices of <u, v>
  double support(const Point& u) const;
  /// max over facets of <n, x> - h; nonpositive inside.
  double max_violation(const Point& x) const;
  /// Containment with tolerance rel_tol * max(1, scale()).
  bool contains(const Point& x, double rel_tol = 1e-9) const;
  /// Largest vertex norm.
  double scale() const;

  /// Checks the structural invariants: vertices satisfy every facet
  /// inequality, each vertex lies on at least d facets, Euler relation.
  /// Throws Degenerate describing the first violation.
  void validate(double rel_tol = 1e-9) const;

 private:
  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Facet> facets_;
  std::vector<VertexSet> facet_vertices_;
  std::vector<std::vector<VertexSet>> faces_;
};

/// Convex hull of a finite point set. d = 2 uses the monotone chain; d >= 3
/// an incremental beneath-beyond construction with coplanar facets merged
/// afterwards. Throws Degenerate when the input is not full-dimensional.
Polytope convex_hull(std::span<const Point> points);

FVector f_vector(const Polytope& p);

/// Polar body {x : <x, y> <= 1 for all y in p}. Requires every facet offset
/// to exceed tol, otherwise throws OriginNotInterior.
Polytope polar_dual(const Polytope& p, double tol = 1e-12);

/// Intersection of halfspaces {<n_i, x> <= s_i} by brute-force vertex
/// enumeration over d-subsets. The caller guarantees boundedness (e.g. by
/// adding box constraints); halfspaces that end up with fewer than d vertices
/// are dropped as redundant.
Polytope polytope_from_halfspaces(int dim,
                                  std::span<const Hyperplane> halfspaces,
                                  double rel_tol = 1e-9);

/// Max over ndirs quasi-uniform directions of |h_p(u) - h_q(u)|. Converges to
/// the Hausdorff distance as ndirs grows; diagnostic grade only.
double approx_hausdorff(const Polytope& p, const Polytope& q, int ndirs);

/// The direction set used by approx_hausdorff: equally spaced angles in 2D,
/// a Fibonacci lattice in 3D, seeded Gaussian directions beyond; the
/// coordinate axes are always included.
std::vector<Point> quasi_uniform_directions(int dim, int ndirs);

}  // namespace hypercross
