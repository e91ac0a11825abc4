#pragma once

#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hypercross/polytope.hpp"
#include "hypercross/samplers.hpp"

namespace hypercross {

using nlohmann::json;

/// Header "x1,...,xd"; one row per point, 17 significant digits.
void write_csv(std::ostream& os, const PointSample& s);
/// Header "u1,...,ud,offset"; one row per plane.
void write_csv(std::ostream& os, const HyperplaneSample& s);

json to_json(const PointSample& s);
json to_json(const HyperplaneSample& s);
/// {"dim", "vertices", "facets": [{"normal", "offset"}], "fvector"}
json to_json(const Polytope& p);
json to_json(const FVector& f);
json point_to_json(const Point& x);

/// Writes the file atomically enough for reports: truncate and write.
void write_text_file(const std::string& path, const std::string& content);

/// 64-bit FNV-1a; used for config hashes.
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t x);

/// Parses flat "key = value" text ('#' starts a comment). Recognized keys
/// (dim, intensity, radius_exponent, rmin, reps, seed, cap) update `base`;
/// any other key is returned in `extras` (e.g. out) if given, otherwise
/// rejected. Throws ConfigError on malformed lines or values.
SimConfig parse_config_text(const std::string& text, SimConfig base,
                            std::map<std::string, std::string>* extras = nullptr);
SimConfig load_config_file(const std::string& path, SimConfig base,
                           std::map<std::string, std::string>* extras = nullptr);

/// Build identifier captured from git at configure time.
const char* build_id();

}  // namespace hypercross
