#include "hypercross/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hypercross/errors.hpp"

#ifndef HYPERCROSS_BUILD_ID
#define HYPERCROSS_BUILD_ID "unknown"
#endif

namespace hypercross {

namespace {

void write_number(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

}  // namespace

void write_csv(std::ostream& os, const PointSample& s) {
  for (int j = 0; j < s.dim; ++j) os << (j ? "," : "") << 'x' << j + 1;
  os << '\n';
  for (const auto& p : s.points) {
    for (int j = 0; j < s.dim; ++j) {
      if (j) os << ',';
      write_number(os, p[j]);
    }
    os << '\n';
  }
}

void write_csv(std::ostream& os, const HyperplaneSample& s) {
  for (int j = 0; j < s.dim; ++j) os << 'u' << j + 1 << ',';
  os << "offset\n";
  for (const auto& h : s.planes) {
    for (int j = 0; j < s.dim; ++j) {
      write_number(os, h.normal[j]);
      os << ',';
    }
    write_number(os, h.offset);
    os << '\n';
  }
}

json point_to_json(const Point& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

json to_json(const PointSample& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(point_to_json(p));
  return {{"dim", s.dim},
          {"meta",
           {{"t", s.meta.intensity},
            {"R", s.meta.radius},
            {"r_min", s.meta.r_min},
            {"seed", s.meta.seed},
            {"stream", s.meta.stream},
            {"skippedTuples", s.meta.skipped_tuples}}},
          {"points", std::move(pts)}};
}

json to_json(const HyperplaneSample& s) {
  json planes = json::array();
  for (const auto& h : s.planes)
    planes.push_back({{"normal", point_to_json(h.normal)}, {"offset", h.offset}});
  return {{"dim", s.dim},
          {"radius", s.radius},
          {"skippedTuples", s.skipped_tuples},
          {"planes", std::move(planes)}};
}

json to_json(const FVector& f) { return f.counts; }

json to_json(const Polytope& p) {
  json verts = json::array();
  for (const auto& v : p.vertices()) verts.push_back(point_to_json(v));
  json facets = json::array();
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    facets.push_back({{"normal", point_to_json(p.facets()[i].normal)},
                      {"offset", p.facets()[i].offset},
                      {"vertices", p.facet_vertices(i)}});
  }
  return {{"dim", p.dim()},
          {"vertices", std::move(verts)},
          {"facets", std::move(facets)},
          {"fvector", to_json(p.f_vector())}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw ConfigError("failed writing " + path);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T x{};
  if (!(is >> x) || !(is >> std::ws).eof())
    throw ConfigError("config: bad value '" + value + "' for " + key);
  return x;
}

}  // namespace

SimConfig parse_config_text(const std::string& text, SimConfig base,
                            std::map<std::string, std::string>* extras) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "dim") base.dim = parse_number<int>(key, value);
    else if (key == "intensity") base.intensity = parse_number<double>(key, value);
    else if (key == "radius_exponent") base.radius_exponent = parse_number<double>(key, value);
    else if (key == "rmin") base.r_min = parse_number<double>(key, value);
    else if (key == "reps") base.reps = parse_number<std::int64_t>(key, value);
    else if (key == "seed") base.master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "cap") base.tuple_cap = parse_number<std::uint64_t>(key, value);
    else if (extras) (*extras)[key] = value;
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return base;
}

SimConfig load_config_file(const std::string& path, SimConfig base,
                           std::map<std::string, std::string>* extras) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str(), base, extras);
}

const char* build_id() { return HYPERCROSS_BUILD_ID; }

}  // namespace hypercross
