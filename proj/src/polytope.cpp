#include "hypercross/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "hypercross/errors.hpp"

namespace hypercross {

// ---------------------------------------------------------------- FVector --

std::int64_t FVector::alternating_sum() const {
  std::int64_t sum = 0;
  for (int k = 0; k < dim(); ++k) sum += (k % 2 == 0 ? 1 : -1) * counts[k];
  return sum;
}

bool FVector::satisfies_euler() const {
  const std::int64_t target = dim() % 2 == 0 ? 0 : 2;
  return alternating_sum() == target;
}

FVector FVector::reversed() const {
  return FVector{{counts.rbegin(), counts.rend()}};
}

// --------------------------------------------------------------- Polytope --

namespace {

using VertexSet = Polytope::VertexSet;

VertexSet intersect_sorted(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool is_subset(const VertexSet& small, const VertexSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

Polytope Polytope::from_incidence(int dim, std::vector<Point> vertices,
                                  std::vector<Facet> facets,
                                  std::vector<VertexSet> facet_vertices) {
  if (dim < 1 || dim > kMaxDim)
    throw DomainError("polytope dimension out of range");
  if (facets.size() != facet_vertices.size())
    throw DomainError("facet list and incidence list differ in length");

  Polytope p;
  p.dim_ = dim;
  p.vertices_ = std::move(vertices);
  p.facets_ = std::move(facets);
  p.facet_vertices_ = std::move(facet_vertices);
  for (auto& fv : p.facet_vertices_) std::sort(fv.begin(), fv.end());

  p.faces_.assign(dim, {});
  {
    std::set<VertexSet> top(p.facet_vertices_.begin(),
                            p.facet_vertices_.end());
    p.faces_[dim - 1].assign(top.begin(), top.end());
  }
  for (int k = dim - 1; k >= 2; --k) {
    std::set<VertexSet> lower;
    for (const auto& face : p.faces_[k]) {
      std::vector<VertexSet> candidates;
      for (const auto& facet : p.faces_[dim - 1]) {
        VertexSet common = intersect_sorted(face, facet);
        // a (k-1)-face has at least k vertices
        if (static_cast<int>(common.size()) < k || common.size() == face.size())
          continue;
        candidates.push_back(std::move(common));
      }
      std::sort(candidates.begin(), candidates.end(),
                [](const VertexSet& a, const VertexSet& b) {
                  return a.size() != b.size() ? a.size() > b.size() : a < b;
                });
      std::vector<VertexSet> maximal;
      for (auto& c : candidates) {
        const bool dominated =
            std::any_of(maximal.begin(), maximal.end(),
                        [&](const VertexSet& m) { return is_subset(c, m); });
        if (!dominated) maximal.push_back(std::move(c));
      }
      lower.insert(maximal.begin(), maximal.end());
    }
    p.faces_[k - 1].assign(lower.begin(), lower.end());
  }
  if (dim >= 2) {
    std::set<int> used;
    for (const auto& fv : p.facet_vertices_) used.insert(fv.begin(), fv.end());
    p.faces_[0].clear();
    for (int v : used) p.faces_[0].push_back({v});
  } else {
    p.faces_[0].clear();
    for (int v = 0; v < static_cast<int>(p.vertices_.size()); ++v)
      p.faces_[0].push_back({v});
  }
  return p;
}

FVector Polytope::f_vector() const {
  FVector f;
  f.counts.resize(dim_);
  for (int k = 0; k < dim_; ++k)
    f.counts[k] = static_cast<std::int64_t>(faces_[k].size());
  return f;
}

double Polytope::support(const Point& u) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) best = std::max(best, u.dot(v));
  return best;
}

double Polytope::max_violation(const Point& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) worst = std::max(worst, f.normal.dot(x) - f.offset);
  return worst;
}

bool Polytope::contains(const Point& x, double rel_tol) const {
  return max_violation(x) <= rel_tol * std::max(1.0, scale());
}

double Polytope::scale() const {
  double s = 0.0;
  for (const auto& v : vertices_) s = std::max(s, v.norm());
  return s;
}

void Polytope::validate(double rel_tol) const {
  if (vertices_.size() < static_cast<std::size_t>(dim_ + 1))
    throw Degenerate("polytope has fewer than d+1 vertices");
  const double tol = rel_tol * std::max(1.0, scale());
  std::vector<int> facet_count(vertices_.size(), 0);
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    for (int v : facet_vertices_[i]) ++facet_count[v];
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (facets_[i].normal.dot(vertices_[v]) - facets_[i].offset > tol)
        throw Degenerate("vertex " + std::to_string(v) +
                         " violates facet " + std::to_string(i));
    }
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (facet_count[v] < dim_)
      throw Degenerate("vertex " + std::to_string(v) + " lies on " +
                       std::to_string(facet_count[v]) + " facets only");
  }
  if (!f_vector().satisfies_euler())
    throw Degenerate("face lattice violates the Euler relation");
}

FVector f_vector(const Polytope& p) { return p.f_vector(); }

// ------------------------------------------------------------ hull: d = 2 --

namespace {

double bbox_extent(std::span<const Point> points) {
  const int d = static_cast<int>(points.front().size());
  double extent = 0.0;
  for (int j = 0; j < d; ++j) {
    double lo = points.front()[j], hi = lo;
    for (const auto& p : points) {
      lo = std::min(lo, p[j]);
      hi = std::max(hi, p[j]);
    }
    extent = std::max(extent, hi - lo);
  }
  return extent;
}

double cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Polytope monotone_chain(std::span<const Point> points) {
  const double extent = bbox_extent(points);
  if (!(extent > 0.0)) throw Degenerate("all points coincide");
  const double area_eps = 1e-9 * extent * extent;

  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& p = points[a];
    const auto& q = points[b];
    return p[0] != q[0] ? p[0] < q[0] : (p[1] != q[1] ? p[1] < q[1] : a < b);
  });

  std::vector<int> hull(2 * order.size());
  std::size_t k = 0;
  for (int idx : order) {
    while (k >= 2 &&
           cross2(points[hull[k - 2]], points[hull[k - 1]], points[idx]) <= area_eps)
      --k;
    hull[k++] = idx;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    const int idx = order[i];
    while (k >= lower &&
           cross2(points[hull[k - 2]], points[hull[k - 1]], points[idx]) <= area_eps)
      --k;
    hull[k++] = idx;
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3)
    throw Degenerate("points are collinear within tolerance");

  const int n = static_cast<int>(hull.size());
  std::vector<Point> vertices;
  vertices.reserve(n);
  for (int idx : hull) vertices.push_back(points[idx]);
  std::vector<Facet> facets;
  std::vector<VertexSet> incidence;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Point edge = vertices[j] - vertices[i];
    Point normal(2);
    normal << edge[1], -edge[0];
    normal.normalize();
    facets.push_back({normal, normal.dot(vertices[i])});
    incidence.push_back({std::min(i, j), std::max(i, j)});
  }
  return Polytope::from_incidence(2, std::move(vertices), std::move(facets),
                                  std::move(incidence));
}

// ------------------------------------------------------------ hull: d >= 3 --

struct HullFacet {
  std::vector<int> verts;  // d point indices
  std::vector<int> nbr;    // nbr[i]: facet across the ridge without verts[i]
  Point normal;
  double offset = 0.0;
  bool alive = true;
};

class IncrementalHull {
 public:
  IncrementalHull(std::span<const Point> points, double rel_eps)
      : pts_(points), d_(static_cast<int>(points.front().size())) {
    extent_ = bbox_extent(points);
    if (!(extent_ > 0.0)) throw Degenerate("all points coincide");
    eps_ = rel_eps * extent_;
  }

  Polytope run() {
    const std::vector<int> simplex = initial_simplex();
    interior_ = Point::Zero(d_);
    for (int i : simplex) interior_ += pts_[i];
    interior_ /= static_cast<double>(d_ + 1);

    // facet j omits simplex[j]
    for (int j = 0; j <= d_; ++j) {
      HullFacet f;
      for (int i = 0; i <= d_; ++i)
        if (i != j) f.verts.push_back(simplex[i]);
      f.nbr.assign(d_, -1);
      set_plane(f);
      facets_.push_back(std::move(f));
    }
    // the ridge of facet j without vertex simplex[m] is shared with facet m
    for (int j = 0; j <= d_; ++j) {
      auto& f = facets_[j];
      for (int pos = 0; pos < d_; ++pos) {
        const int m = static_cast<int>(
            std::find(simplex.begin(), simplex.end(), f.verts[pos]) -
            simplex.begin());
        f.nbr[pos] = m;
      }
    }

    std::vector<char> in_simplex(pts_.size(), 0);
    for (int i : simplex) in_simplex[i] = 1;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
      if (!in_simplex[i]) add_point(i);
    return extract();
  }

 private:
  std::vector<int> initial_simplex() {
    const int n = static_cast<int>(pts_.size());
    int first = 0;
    for (int i = 1; i < n; ++i)
      if (pts_[i][0] < pts_[first][0]) first = i;
    std::vector<int> chosen{first};
    std::vector<Point> basis;
    for (int step = 0; step < d_; ++step) {
      int best = -1;
      double best_dist = -1.0;
      Point best_residual;
      for (int i = 0; i < n; ++i) {
        Point r = pts_[i] - pts_[first];
        for (const auto& b : basis) r -= r.dot(b) * b;
        const double dist = r.norm();
        if (dist > best_dist) {
          best_dist = dist;
          best = i;
          best_residual = r;
        }
      }
      if (best_dist <= eps_)
        throw Degenerate("points lie within tolerance of a common hyperplane");
      chosen.push_back(best);
      basis.push_back(best_residual / best_dist);
    }
    return chosen;
  }

  void set_plane(HullFacet& f) const {
    SmallMatrix edges(d_, d_ - 1);
    for (int i = 1; i < d_; ++i) edges.col(i - 1) = pts_[f.verts[i]] - pts_[f.verts[0]];
    Eigen::HouseholderQR<SmallMatrix> qr(edges);
    SmallMatrix q = qr.householderQ() * SmallMatrix::Identity(d_, d_);
    Point n = q.col(d_ - 1);
    n.normalize();
    double off = n.dot(pts_[f.verts[0]]);
    if (n.dot(interior_) - off > 0.0) {
      n = -n;
      off = -off;
    }
    f.normal = std::move(n);
    f.offset = off;
  }

  void add_point(int pi) {
    const Point& p = pts_[pi];
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f) {
      if (facets_[f].alive && facets_[f].normal.dot(p) - facets_[f].offset > eps_)
        visible.push_back(f);
    }
    if (visible.empty()) return;
    if (is_visible_.size() < facets_.size()) is_visible_.resize(facets_.size(), 0);
    for (int f : visible) is_visible_[f] = 1;

    std::vector<int> created;
    for (int f : visible) {
      for (int pos = 0; pos < d_; ++pos) {
        const int g = facets_[f].nbr[pos];
        if (is_visible_[g]) continue;
        HullFacet nf;
        for (int i = 0; i < d_; ++i)
          if (i != pos) nf.verts.push_back(facets_[f].verts[i]);
        nf.verts.push_back(pi);
        nf.nbr.assign(d_, -1);
        nf.nbr[d_ - 1] = g;
        set_plane(nf);
        const int id = static_cast<int>(facets_.size());
        auto& gn = facets_[g].nbr;
        std::replace(gn.begin(), gn.end(), f, id);
        facets_.push_back(std::move(nf));
        is_visible_.push_back(0);
        created.push_back(id);
      }
    }
    for (int f : visible) {
      facets_[f].alive = false;
      is_visible_[f] = 0;
    }

    // glue the new facets along ridges that contain the new point
    std::map<std::vector<int>, std::pair<int, int>> open;
    for (int id : created) {
      for (int pos = 0; pos < d_ - 1; ++pos) {
        std::vector<int> key;
        for (int i = 0; i < d_; ++i)
          if (i != pos) key.push_back(facets_[id].verts[i]);
        std::sort(key.begin(), key.end());
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(std::move(key), std::make_pair(id, pos));
        } else {
          facets_[id].nbr[pos] = it->second.first;
          facets_[it->second.first].nbr[it->second.second] = id;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw Degenerate("inconsistent horizon in hull update");
  }

  Polytope extract() {
    std::vector<int> alive;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
      if (facets_[f].alive) alive.push_back(f);

    // union coplanar neighbours
    std::map<int, int> parent;
    for (int f : alive) parent[f] = f;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto coplanar = [&](const HullFacet& a, const HullFacet& b) {
      for (int v : b.verts)
        if (std::fabs(a.normal.dot(pts_[v]) - a.offset) > eps_) return false;
      for (int v : a.verts)
        if (std::fabs(b.normal.dot(pts_[v]) - b.offset) > eps_) return false;
      return a.normal.dot(b.normal) > 0.0;
    };
    for (int f : alive)
      for (int g : facets_[f].nbr)
        if (g > f && coplanar(facets_[f], facets_[g])) parent[find(f)] = find(g);

    std::map<int, std::set<int>> groups;
    for (int f : alive)
      groups[find(f)].insert(facets_[f].verts.begin(), facets_[f].verts.end());

    std::vector<Facet> facets;
    std::vector<std::set<int>> members;
    for (auto& [root, verts] : groups) {
      Point n = facets_[root].normal;
      double off = -std::numeric_limits<double>::infinity();
      for (int v : verts) off = std::max(off, n.dot(pts_[v]));
      facets.push_back({n, off});
      members.push_back(verts);
    }

    // drop points that lie in the relative interior of a face
    std::set<int> candidates;
    for (const auto& m : members) candidates.insert(m.begin(), m.end());
    std::vector<int> kept;
    for (int v : candidates) {
      std::vector<Point> cols;
      for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].count(v)) cols.push_back(facets[i].normal);
      // a vertex needs incident facet normals of full rank
      Eigen::MatrixXd all(d_, cols.size());
      for (std::size_t i = 0; i < cols.size(); ++i) all.col(i) = cols[i];
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(all);
      qr.setThreshold(1e-9);
      if (qr.rank() >= d_) kept.push_back(v);
    }
    std::map<int, int> remap;
    std::vector<Point> vertices;
    for (int v : kept) {
      remap[v] = static_cast<int>(vertices.size());
      vertices.push_back(pts_[v]);
    }
    std::vector<VertexSet> incidence;
    for (const auto& m : members) {
      VertexSet fv;
      for (int v : m) {
        auto it = remap.find(v);
        if (it != remap.end()) fv.push_back(it->second);
      }
      incidence.push_back(std::move(fv));
    }
    return Polytope::from_incidence(d_, std::move(vertices), std::move(facets),
                                    std::move(incidence));
  }

  std::span<const Point> pts_;
  int d_;
  double extent_ = 0.0;
  double eps_ = 0.0;
  Point interior_;
  std::vector<HullFacet> facets_;
  std::vector<char> is_visible_;
};

}  // namespace

Polytope convex_hull(std::span<const Point> points) {
  if (points.empty()) throw Degenerate("empty point set");
  const int d = static_cast<int>(points.front().size());
  if (d < 2 || d > kMaxDim) throw UnsupportedDimension("hull dimension out of range");
  if (points.size() < static_cast<std::size_t>(d + 1))
    throw Degenerate("fewer than d+1 points");
  for (const auto& p : points)
    if (p.size() != d || !p.allFinite())
      throw DomainError("hull input must be finite points of equal dimension");

  if (d == 2) {
    Polytope hull = monotone_chain(points);
    hull.validate();
    return hull;
  }
  // first attempt at 1e-9, documented retry at 1e-7
  for (double rel_eps : {1e-9, 1e-7}) {
    try {
      Polytope hull = IncrementalHull(points, rel_eps).run();
      hull.validate(std::max(rel_eps, 1e-9));
      return hull;
    } catch (const Degenerate& e) {
      if (rel_eps == 1e-7) throw;
    }
  }
  throw Degenerate("unreachable");
}

// ------------------------------------------------------------- polar dual --

Polytope polar_dual(const Polytope& p, double tol) {
  for (const auto& f : p.facets())
    if (!(f.offset > tol))
      throw OriginNotInterior("origin is not interior to the polytope");

  std::vector<Point> vertices;
  vertices.reserve(p.facets().size());
  for (const auto& f : p.facets()) vertices.push_back(f.normal / f.offset);

  std::vector<Facet> facets;
  facets.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) {
    const double norm = v.norm();
    facets.push_back({v / norm, 1.0 / norm});
  }
  // transpose the incidence: dual facet j holds dual vertex i iff primal
  // vertex j lies on primal facet i
  std::vector<VertexSet> incidence(p.vertices().size());
  for (std::size_t i = 0; i < p.facets().size(); ++i)
    for (int v : p.facet_vertices(i)) incidence[v].push_back(static_cast<int>(i));

  return Polytope::from_incidence(p.dim(), std::move(vertices),
                                  std::move(facets), std::move(incidence));
}

// ---------------------------------------------------- halfspace polytope --

Polytope polytope_from_halfspaces(int dim,
                                  std::span<const Hyperplane> halfspaces,
                                  double rel_tol) {
  const int n = static_cast<int>(halfspaces.size());
  if (n < dim + 1) throw Degenerate("too few halfspaces for a bounded polytope");

  auto within = [&](const Point& x) {
    const double tol = rel_tol * (1.0 + x.norm());
    for (const auto& h : halfspaces)
      if (h.signed_distance(x) > tol) return false;
    return true;
  };

  std::vector<Point> vertices;
  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Hyperplane> tuple(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) tuple[i] = halfspaces[idx[i]];
    if (auto x = try_intersect_hyperplanes(tuple); x && within(*x)) {
      const double merge = rel_tol * (1.0 + x->norm());
      const bool duplicate =
          std::any_of(vertices.begin(), vertices.end(),
                      [&](const Point& v) { return (v - *x).norm() <= merge; });
      if (!duplicate) vertices.push_back(*x);
    }
    int i = dim - 1;
    while (i >= 0 && idx[i] == n - dim + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (vertices.size() < static_cast<std::size_t>(dim + 1))
    throw Degenerate("halfspace intersection is empty or lower-dimensional");

  std::vector<Facet> facets;
  std::vector<VertexSet> incidence;
  for (const auto& h : halfspaces) {
    VertexSet on;
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
      if (std::fabs(h.signed_distance(vertices[v])) <=
          rel_tol * (1.0 + vertices[v].norm()))
        on.push_back(v);
    if (static_cast<int>(on.size()) < dim) continue;
    facets.push_back({h.normal, h.offset});
    incidence.push_back(std::move(on));
  }
  Polytope p = Polytope::from_incidence(dim, std::move(vertices),
                                        std::move(facets), std::move(incidence));
  p.validate(rel_tol);
  return p;
}

// ------------------------------------------------------------- Hausdorff --

std::vector<Point> quasi_uniform_directions(int dim, int ndirs) {
  std::vector<Point> dirs;
  for (int j = 0; j < dim; ++j) {
    Point e = Point::Zero(dim);
    e[j] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (dim == 2) {
    for (int i = 0; i < ndirs; ++i) {
      const double a = 2.0 * std::numbers::pi * i / ndirs;
      Point u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
  } else if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < ndirs; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / ndirs;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Point u(3);
      u << r * std::cos(golden * i), r * std::sin(golden * i), z;
      dirs.push_back(u);
    }
  } else {
    Rng rng(0x5eedd1ec7ull, static_cast<std::uint64_t>(dim));
    for (int i = 0; i < ndirs; ++i) dirs.push_back(uniform_on_sphere(dim, rng));
  }
  return dirs;
}

double approx_hausdorff(const Polytope& p, const Polytope& q, int ndirs) {
  if (p.dim() != q.dim()) throw DomainError("polytopes differ in dimension");
  double best = 0.0;
  for (const auto& u : quasi_uniform_directions(p.dim(), ndirs))
    best = std::max(best, std::fabs(p.support(u) - q.support(u)));
  return best;
}

}  // namespace hypercross
