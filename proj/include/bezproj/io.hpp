#ifndef BEZPROJ_IO_HPP
#define BEZPROJ_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bezproj/errors.hpp"
#include "bezproj/scalar.hpp"
#include "bezproj/spline_space.hpp"
#include "bezproj/tmesh.hpp"

namespace bezproj {

using Json = nlohmann::ordered_json;

template <Scalar T>
struct SplineDocument {
  SplineSpace<T> space;
  ControlNet<T> net;
};

namespace detail {

inline void walk_numbers(const Json& j, bool& has_float) {
  if (j.is_number_float()) has_float = true;
  if (j.is_array() || j.is_object())
    for (const auto& v : j) walk_numbers(v, has_float);
}

template <Scalar T>
T read_scalar(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) {
      const Rational r = parse_rational(j.get<std::string>());
      if constexpr (ScalarTraits<T>::exact) {
        return r;
      } else {
        return to_double(r);
      }
    }
    if (j.is_number_integer()) return T(j.get<std::int64_t>());
    if (j.is_number_float()) {
      if constexpr (ScalarTraits<T>::exact) {
        return Rational(j.get<double>());
      } else {
        return j.get<double>();
      }
    }
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a number or a rational string");
}

inline const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + key + "'");
  return j.at(key);
}

inline const Json& array_field(const Json& j, const std::string& key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw ParseError("field '" + key + "' must be an array");
  return v;
}

inline int read_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

template <Scalar T>
Json write_scalar(const T& v) {
  if constexpr (ScalarTraits<T>::exact) {
    if (boost::multiprecision::denominator(v) == 1) {
      const auto n = boost::multiprecision::numerator(v);
      if (n <= std::numeric_limits<std::int64_t>::max() && n >= std::numeric_limits<std::int64_t>::min())
        return Json(n.template convert_to<std::int64_t>());
    }
    return Json(to_string(v));
  } else {
    return Json(v);
  }
}

/// Top-level object with arrays of arrays one row per line.
inline std::string pretty(const Json& doc) {
  std::ostringstream os;
  os << "{\n";
  std::size_t k = 0;
  for (auto it = doc.begin(); it != doc.end(); ++it, ++k) {
    os << "  " << Json(it.key()).dump() << ": ";
    const auto& v = it.value();
    if (v.is_array() && !v.empty() && v.front().is_array()) {
      os << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) os << "    " << v[i].dump() << (i + 1 < v.size() ? ",\n" : "\n");
      os << "  ]";
    } else {
      os << v.dump();
    }
    os << (k + 1 < doc.size() ? ",\n" : "\n");
  }
  os << "}\n";
  return os.str();
}

}  // namespace detail

/// Parses JSON text, reporting the line of a syntax error.
inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(source + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

/// Exact mode: no floating-point literal anywhere in the document.
inline bool is_rational_document(const Json& j) {
  bool has_float = false;
  detail::walk_numbers(j, has_float);
  return !has_float;
}

template <Scalar T>
SplineDocument<T> parse_spline(const Json& j) {
  const int dp = detail::read_int(detail::field(j, "parametric_dim"), "parametric_dim");
  const int ds = detail::read_int(detail::field(j, "physical_dim"), "physical_dim");
  if (dp < 1) throw ParseError("parametric_dim: must be positive");
  if (ds < 1) throw ParseError("physical_dim: must be positive");
  const auto& degs = detail::array_field(j, "degrees");
  const auto& kvs = detail::array_field(j, "knot_vectors");
  if (static_cast<int>(degs.size()) != dp) throw ParseError("degrees: expected " + std::to_string(dp) + " entries");
  if (static_cast<int>(kvs.size()) != dp) throw ParseError("knot_vectors: expected " + std::to_string(dp) + " entries");
  std::vector<KnotVector<T>> dirs;
  for (int d = 0; d < dp; ++d) {
    const std::string where = "knot_vectors[" + std::to_string(d) + "]";
    const int p = detail::read_int(degs[d], "degrees[" + std::to_string(d) + "]");
    if (!kvs[d].is_array()) throw ParseError(where + ": must be an array");
    std::vector<T> k;
    for (std::size_t i = 0; i < kvs[d].size(); ++i)
      k.push_back(detail::read_scalar<T>(kvs[d][i], where + "[" + std::to_string(i) + "]"));
    try {
      dirs.emplace_back(p, std::move(k));
    } catch (const DomainError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  SplineDocument<T> doc{SplineSpace<T>(std::move(dirs)), {}};
  const auto& cps = detail::array_field(j, "control_points");
  const std::size_t n = doc.space.num_functions();
  if (cps.size() != n) {
    throw ParseError("control_points: expected " + std::to_string(n) + " rows, found " + std::to_string(cps.size()));
  }
  doc.net.points = DenseMatrix<T>(n, static_cast<std::size_t>(ds));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "control_points[" + std::to_string(i) + "]";
    if (!cps[i].is_array() || static_cast<int>(cps[i].size()) != ds) {
      throw ParseError(where + ": expected " + std::to_string(ds) + " coordinates");
    }
    for (int c = 0; c < ds; ++c)
      doc.net.points(i, c) = detail::read_scalar<T>(cps[i][c], where + "[" + std::to_string(c) + "]");
  }
  if (j.contains("weights")) {
    const auto& w = detail::array_field(j, "weights");
    if (w.size() != n) throw ParseError("weights: expected " + std::to_string(n) + " entries");
    std::vector<T> ws;
    for (std::size_t i = 0; i < n; ++i) {
      ws.push_back(detail::read_scalar<T>(w[i], "weights[" + std::to_string(i) + "]"));
      if (!(ws.back() > T(0))) throw ParseError("weights[" + std::to_string(i) + "]: must be positive");
    }
    doc.net.weights = std::move(ws);
  }
  return doc;
}

template <Scalar T>
Json spline_to_json(const SplineSpace<T>& space, const ControlNet<T>& net) {
  Json j;
  j["parametric_dim"] = space.dim();
  j["physical_dim"] = net.physical_dim();
  j["degrees"] = space.degrees();
  Json kvs = Json::array();
  for (const auto& kv : space.directions()) {
    Json k = Json::array();
    for (const auto& v : kv.knots()) k.push_back(detail::write_scalar(v));
    kvs.push_back(std::move(k));
  }
  j["knot_vectors"] = std::move(kvs);
  Json cps = Json::array();
  for (std::size_t i = 0; i < net.size(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < net.physical_dim(); ++c) row.push_back(detail::write_scalar(net.points(i, c)));
    cps.push_back(std::move(row));
  }
  j["control_points"] = std::move(cps);
  if (net.weights) {
    Json w = Json::array();
    for (const auto& v : *net.weights) w.push_back(detail::write_scalar(v));
    j["weights"] = std::move(w);
  }
  return j;
}

template <Scalar T>
std::string write_spline(const SplineSpace<T>& space, const ControlNet<T>& net) {
  return detail::pretty(spline_to_json(space, net));
}

template <Scalar T>
TMesh<T> parse_tmesh(const Json& j) {
  const auto& degs = detail::array_field(j, "degrees");
  const auto& kvs = detail::array_field(j, "knot_vectors");
  if (degs.size() != 2 || kvs.size() != 2) throw ParseError("T-mesh needs exactly two degrees and knot vectors");
  std::array<int, 2> p{detail::read_int(degs[0], "degrees[0]"), detail::read_int(degs[1], "degrees[1]")};
  std::vector<KnotVector<T>> k;
  for (int d = 0; d < 2; ++d) {
    const std::string where = "knot_vectors[" + std::to_string(d) + "]";
    std::vector<T> v;
    for (std::size_t i = 0; i < kvs[d].size(); ++i)
      v.push_back(detail::read_scalar<T>(kvs[d][i], where + "[" + std::to_string(i) + "]"));
    try {
      k.emplace_back(p[d], std::move(v));
    } catch (const DomainError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  std::vector<Segment> edges;
  const auto& es = detail::array_field(j, "edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!es[i].is_array() || es[i].size() != 4) throw ParseError(where + ": expected [i1,j1,i2,j2]");
    edges.push_back({detail::read_int(es[i][0], where), detail::read_int(es[i][1], where),
                     detail::read_int(es[i][2], where), detail::read_int(es[i][3], where)});
  }
  std::optional<std::vector<std::array<int, 2>>> verts;
  if (j.contains("vertices")) {
    verts.emplace();
    const auto& vs = detail::array_field(j, "vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::string where = "vertices[" + std::to_string(i) + "]";
      if (!vs[i].is_array() || vs[i].size() != 2) throw ParseError(where + ": expected [i,j]");
      verts->push_back({detail::read_int(vs[i][0], where), detail::read_int(vs[i][1], where)});
    }
  }
  return TMesh<T>(p, {k[0], k[1]}, edges, verts);
}

template <Scalar T>
Json tmesh_to_json(const TMesh<T>& mesh) {
  Json j;
  j["degrees"] = {mesh.degree(0), mesh.degree(1)};
  Json kvs = Json::array();
  for (int d = 0; d < 2; ++d) {
    Json k = Json::array();
    for (const auto& v : mesh.knot_vector(d).knots()) k.push_back(detail::write_scalar(v));
    kvs.push_back(std::move(k));
  }
  j["knot_vectors"] = std::move(kvs);
  Json vs = Json::array();
  for (const auto& [x, y] : mesh.vertices()) vs.push_back({x, y});
  j["vertices"] = std::move(vs);
  Json es = Json::array();
  for (const auto& s : mesh.segments()) es.push_back({s.x1, s.y1, s.x2, s.y2});
  j["edges"] = std::move(es);
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace bezproj

#endif  // BEZPROJ_IO_HPP
