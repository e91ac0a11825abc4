#include "hypercross/figure.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "hypercross/errors.hpp"
#include "hypercross/io.hpp"
#include "hypercross/polytope.hpp"

namespace hypercross {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Segment of the line <u, x> = s inside the square [-w, w]^2.
std::optional<std::pair<Point, Point>> clip_line(const Hyperplane& h, double w) {
  Point p0 = h.offset * h.normal;
  Point v(2);
  v << -h.normal[1], h.normal[0];
  double lo = -INFINITY, hi = INFINITY;
  for (int j = 0; j < 2; ++j) {
    if (std::fabs(v[j]) < 1e-15) {
      if (std::fabs(p0[j]) > w) return std::nullopt;
      continue;
    }
    double a = (-w - p0[j]) / v[j];
    double b = (w - p0[j]) / v[j];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(Point(p0 + lo * v), Point(p0 + hi * v));
}

// Sutherland-Hodgman against [-w, w]^2; keeps far hull vertices printable.
std::vector<Point> clip_polygon(std::vector<Point> poly, double w) {
  for (int axis = 0; axis < 2; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::vector<Point> out;
      auto inside = [&](const Point& p) { return sign * p[axis] <= w; };
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        if (inside(a)) out.push_back(a);
        if (inside(a) != inside(b)) {
          const double s = (sign * w - a[axis]) / (b[axis] - a[axis]);
          out.push_back(a + s * (b - a));
        }
      }
      poly = std::move(out);
    }
  }
  return poly;
}

std::string exponent_label(const SimConfig& c) {
  const double e = c.effective_radius_exponent();
  const double def = static_cast<double>(c.dim) / (c.dim + 1);
  if (std::fabs(e - def) < 1e-12)
    return "-" + std::to_string(c.dim) + "/" + std::to_string(c.dim + 1);
  return "-" + fmt(e);
}

std::string one_digit(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1g", x);
  return buf;
}

}  // namespace

std::string render_figure_svg(const SimConfig& config, const FigureOptions& opt,
                              FigureSummary* summary) {
  if (config.dim != 2)
    throw UnsupportedDimension("figures are only drawn for d = 2");
  config.validate();
  if (opt.panels < 1 || !(opt.zoom > 1.0) || !(opt.outer_half_width > 0.0))
    throw ConfigError("figure: need panels >= 1, zoom > 1, half-width > 0");

  Rng rng(config.master_seed, 0);
  const double radius = config.radius();
  const HyperplaneSample lines =
      sample_poisson_hyperplanes(config.intensity, radius, 2, rng);
  const PointSample pts = intersection_process(lines, config.tuple_cap);

  FigureSummary info;
  info.lines = lines.planes.size();
  info.points = pts.points.size();
  info.skipped = pts.meta.skipped_tuples;
  info.radius = radius;
  std::optional<Polytope> hull;
  if (pts.points.size() >= 3) {
    try {
      hull = convex_hull(pts.points);
      info.hull_drawn = true;
      info.hull_contains_origin = hull->max_violation(Point::Zero(2)) < 0.0;
    } catch (const Degenerate&) {
    }
  }

  const int px = opt.panel_pixels;
  const int gap = 12;
  const int label_h = 24;
  const int width = opt.panels * px + (opt.panels + 1) * gap;
  const int height = px + 2 * gap + 2 * label_h;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << gap << "\" y=\"" << label_h - 6
     << "\" font-family=\"sans-serif\" font-size=\"14\">t=" << fmt(config.intensity)
     << ", R=t^{" << exponent_label(config) << "}≈" << one_digit(radius)
     << ", " << info.lines << " lines, " << info.points
     << " points; zoom ×" << fmt(opt.zoom)
     << " per panel (presentation only)</text>\n";

  double w = opt.outer_half_width;
  for (int k = 0; k < opt.panels; ++k, w /= opt.zoom) {
    const double x0 = gap + k * (px + gap);
    const double y0 = label_h + gap;
    const double scale = px / (2.0 * w);
    auto sx = [&](double x) { return fmt(x0 + (x + w) * scale); };
    auto sy = [&](double y) { return fmt(y0 + (w - y) * scale); };

    os << "<g id=\"panel" << k << "\">\n";
    os << "<clipPath id=\"clip" << k << "\"><rect x=\"" << x0 << "\" y=\"" << y0
       << "\" width=\"" << px << "\" height=\"" << px << "\"/></clipPath>\n";
    os << "<g clip-path=\"url(#clip" << k << ")\">\n";
    for (const auto& h : lines.planes) {
      if (auto seg = clip_line(h, w)) {
        os << "<line x1=\"" << sx(seg->first[0]) << "\" y1=\"" << sy(seg->first[1])
           << "\" x2=\"" << sx(seg->second[0]) << "\" y2=\""
           << sy(seg->second[1]) << "\" stroke=\"#1f5fbf\" stroke-width=\"0.6\"/>\n";
      }
    }
    if (hull) {
      os << "<polygon fill=\"none\" stroke=\"#f08a00\" stroke-width=\"1.5\" points=\"";
      for (const auto& q : clip_polygon(hull->vertices(), 2.0 * w))
        os << sx(q[0]) << ',' << sy(q[1]) << ' ';
      os << "\"/>\n";
    }
    os << "<circle cx=\"" << sx(0.0) << "\" cy=\"" << sy(0.0) << "\" r=\""
       << fmt(radius * scale) << "\" fill=\"none\" stroke=\"#d01c1c\" stroke-width=\"1.2\"/>\n";
    for (const auto& p : pts.points) {
      if (std::fabs(p[0]) > w || std::fabs(p[1]) > w) continue;
      os << "<circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1])
         << "\" r=\"1.4\" fill=\"black\"/>\n";
    }
    os << "</g>\n";
    os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << px
       << "\" height=\"" << px << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << x0 << "\" y=\"" << y0 + px + label_h - 6
       << "\" font-family=\"sans-serif\" font-size=\"12\">half-width "
       << fmt(w) << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  if (summary) *summary = info;
  return os.str();
}

FigureSummary render_figure(const SimConfig& config, const std::string& path,
                            const FigureOptions& opt) {
  FigureSummary info;
  write_text_file(path, render_figure_svg(config, opt, &info));
  return info;
}

}  // namespace hypercross
