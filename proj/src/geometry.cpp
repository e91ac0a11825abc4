#include "hypercross/geometry.hpp"

#include <cmath>

#include "hypercross/errors.hpp"

namespace hypercross {

Hyperplane Hyperplane::canonical(const Point& normal, double offset) {
  const double norm = normal.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw DomainError("hyperplane normal must be nonzero and finite");
  Point u = normal / norm;
  double s = offset / norm;
  bool flip = s < 0.0;
  if (s == 0.0) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] != 0.0) {
        flip = u[i] < 0.0;
        break;
      }
    }
  }
  if (flip) {
    u = -u;
    s = -s;
  }
  return Hyperplane{std::move(u), s};
}

std::optional<Point> try_intersect_hyperplanes(
    std::span<const Hyperplane> planes, double tol) {
  const auto d = static_cast<Eigen::Index>(planes.size());
  if (d == 0 || planes.front().normal.size() != d) return std::nullopt;

  Point x(d);
  if (d == 2) {
    const Point& u = planes[0].normal;
    const Point& v = planes[1].normal;
    const double det = u[0] * v[1] - u[1] * v[0];
    if (det * det < kSingularGramTol) return std::nullopt;
    x[0] = (planes[0].offset * v[1] - planes[1].offset * u[1]) / det;
    x[1] = (u[0] * planes[1].offset - v[0] * planes[0].offset) / det;
  } else {
    SmallMatrix normals(d, d);
    Point offsets(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      normals.row(i) = planes[i].normal.transpose();
      offsets[i] = planes[i].offset;
    }
    Eigen::PartialPivLU<SmallMatrix> lu(normals);
    const double det = lu.determinant();
    if (det * det < kSingularGramTol) return std::nullopt;
    x = lu.solve(offsets);
  }

  const double scale = tol * (1.0 + x.norm());
  for (const auto& h : planes) {
    if (!(std::fabs(h.signed_distance(x)) <= scale)) return std::nullopt;
  }
  return x;
}

Point intersect_hyperplanes(std::span<const Hyperplane> planes, double tol) {
  if (planes.empty() ||
      planes.front().normal.size() != static_cast<Eigen::Index>(planes.size()))
    throw DomainError("intersect_hyperplanes needs exactly d planes in R^d");
  auto x = try_intersect_hyperplanes(planes, tol);
  if (!x) throw NearSingular("hyperplanes are not in general position");
  return *x;
}

double subspace_determinant(std::span<const Point> vectors) {
  const auto l = static_cast<Eigen::Index>(vectors.size());
  if (l == 0) return 0.0;
  SmallMatrix gram(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = i; j < l; ++j)
      gram(i, j) = gram(j, i) = vectors[i].dot(vectors[j]);
  const double det = Eigen::PartialPivLU<SmallMatrix>(gram).determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

double abs_determinant(std::span<const Point> vectors) {
  const auto d = static_cast<Eigen::Index>(vectors.size());
  if (d == 0 || vectors.front().size() != d)
    throw DomainError("abs_determinant needs d vectors in R^d");
  if (d == 2)
    return std::fabs(vectors[0][0] * vectors[1][1] -
                     vectors[0][1] * vectors[1][0]);
  if (d == 3) {
    const Point& a = vectors[0];
    const Point& b = vectors[1];
    const Point& c = vectors[2];
    return std::fabs(a[0] * (b[1] * c[2] - b[2] * c[1]) -
                     a[1] * (b[0] * c[2] - b[2] * c[0]) +
                     a[2] * (b[0] * c[1] - b[1] * c[0]));
  }
  SmallMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m.col(i) = vectors[i];
  return std::fabs(Eigen::PartialPivLU<SmallMatrix>(m).determinant());
}

Rotation random_rotation(int d, Rng& rng) {
  if (d < 2 || d > kMaxDim)
    throw DomainError("random_rotation: dimension out of range");
  SmallMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<SmallMatrix> qr(g);
  SmallMatrix q = qr.householderQ() * SmallMatrix::Identity(d, d);
  const SmallMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return Rotation{std::move(q)};
}

Point uniform_on_sphere(int d, Rng& rng) {
  Point x(d);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) x[i] = rng.normal();
    norm2 = x.squaredNorm();
  } while (norm2 < 1e-300);
  return x / std::sqrt(norm2);
}

}  // namespace hypercross
