// bezproj: file-based spline operations, operator dumps and benchmarks.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bezproj/benchmark.hpp"
#include "bezproj/io.hpp"
#include "bezproj/projection.hpp"
#include "bezproj/spline_ops.hpp"
#include "bezproj/tmesh.hpp"

using namespace bezproj;

namespace {

struct Options {
  std::string in;
  std::string out;
  std::string weighting = "approx";
  std::string projector = "both";
  std::string degrees = "2";
  std::string target = "sine";
  std::string elements;  // per direction lists, ';' between directions
  std::string knots;
  std::string by;
  std::string positions;
  int levels = 5;
  std::size_t base = 8;
  int quad_order = 0;
  long element = -1;
  long anchor = -1;
  double length = 2.0;
  double radius = 1.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <Scalar T>
T to_scalar(const std::string& s) {
  const Rational r = parse_rational(s);
  if constexpr (ScalarTraits<T>::exact) {
    return r;
  } else {
    return to_double(r);
  }
}

// "a,b;c" -> {{a,b},{c}}; a missing direction is an empty list.
template <typename V, typename F>
std::vector<std::vector<V>> per_direction(const std::string& text, std::size_t dims, F conv, const char* flag) {
  std::vector<std::vector<V>> out(dims);
  const auto parts = split(text, ';');
  if (parts.size() > dims) throw ParseError(std::string(flag) + ": more direction groups than parametric directions");
  for (std::size_t d = 0; d < parts.size(); ++d)
    for (const auto& item : split(parts[d], ',')) {
      const auto t = trim(item);
      if (!t.empty()) out[d].push_back(conv(t));
    }
  return out;
}

std::vector<int> int_list(const std::string& text, std::size_t dims, int fallback, const char* flag) {
  if (text.empty()) return std::vector<int>(dims, fallback);
  std::vector<int> out;
  for (const auto& t : split(text, ',')) out.push_back(std::stoi(trim(t)));
  if (out.size() == 1 && dims > 1) out.assign(dims, out.front());
  if (out.size() != dims) throw ParseError(std::string(flag) + ": expected one value per parametric direction");
  return out;
}

template <Scalar T>
std::string fmt(const T& v) {
  if constexpr (ScalarTraits<T>::exact) {
    return to_string(v);
  } else {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  }
}

template <Scalar T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + "}";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

// Spline-level operations use parametric weights where "exact" is asked for.
WeightMode op_weighting(const std::string& s) {
  const auto m = parse_weight_mode(s);
  return m == WeightMode::exact ? WeightMode::parametric : m;
}

template <Scalar T>
int run_op(const std::string& name, const Json& doc_json, const Options& o) {
  const auto doc = parse_spline<T>(doc_json);
  const auto& s = doc.space;
  const WeightMode mode = op_weighting(o.weighting);
  const auto scalar = [](const std::string& t) { return to_scalar<T>(t); };
  OpResult<T> r;
  if (name == "h-refine") {
    const auto split_els = o.elements.empty()
                               ? all_elements(s)
                               : per_direction<std::size_t>(o.elements, s.dim(),
                                                            [](const std::string& t) { return std::stoul(t); },
                                                            "--elements");
    r = h_refine(s, doc.net, split_els, mode);
  } else if (name == "h-coarsen") {
    r = h_coarsen(s, doc.net, per_direction<T>(o.knots, s.dim(), scalar, "--knots"), mode);
  } else if (name == "p-elevate") {
    r = p_elevate(s, doc.net, int_list(o.by, s.dim(), 1, "--by"), mode);
  } else if (name == "p-reduce") {
    r = p_reduce(s, doc.net, int_list(o.by, s.dim(), 1, "--by"), mode);
  } else if (name == "k-roughen") {
    r = k_roughen(s, doc.net, per_direction<T>(o.knots, s.dim(), scalar, "--knots"), mode);
  } else if (name == "k-smooth") {
    r = k_smooth(s, doc.net, per_direction<T>(o.knots, s.dim(), scalar, "--knots"), mode);
  } else if (name == "reparam") {
    r = reparameterize(s, doc.net, per_direction<T>(o.positions, s.dim(), scalar, "--positions"), mode);
  } else {
    throw DomainError("unknown operation '" + name + "'");
  }
  emit(o.out, write_spline(r.space, r.net));
  std::ostream& log = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  log << name << ": elements " << s.num_elements() << " -> " << r.space.num_elements() << ", functions "
      << s.num_functions() << " -> " << r.space.num_functions() << ", " << (r.exact ? "exact" : "inexact");
  if (!r.exact) {
    const double d = spline_distance(s.template cast<double>(), doc.net.template cast<double>(),
                                     r.space.template cast<double>(), r.net.template cast<double>());
    log << ", L2 change " << std::setprecision(6) << d << " (weighting " << to_string(mode) << ")";
  }
  log << "\n";
  return 0;
}

template <Scalar T>
int run_extract(const Json& doc_json, const Options& o) {
  const auto doc = parse_spline<T>(doc_json);
  const auto& s = doc.space;
  std::size_t first = 0, last = s.num_elements();
  if (o.element >= 0) {
    if (static_cast<std::size_t>(o.element) >= s.num_elements()) {
      throw DomainError("--element " + std::to_string(o.element) + " out of range (space has " +
                        std::to_string(s.num_elements()) + " elements)");
    }
    first = static_cast<std::size_t>(o.element);
    last = first + 1;
  }
  std::ostringstream os;
  for (std::size_t e = first; e < last; ++e) {
    const auto el = s.element(e);
    const auto ops = s.extraction_operator(e);
    os << "element " << e << " [";
    for (std::size_t d = 0; d < s.dim(); ++d) os << (d ? " x " : "") << fmt(el.lo[d]) << "," << fmt(el.hi[d]);
    os << "] functions";
    for (auto a : el.functions) os << ' ' << a;
    os << "\nC =\n" << ops.C << "\nR =\n" << ops.R << "\n";
    if (s.dim() > 1) {
      for (std::size_t d = 0; d < s.dim(); ++d) {
        os << "C[" << d << "] =\n" << ops.C_factors[d] << "\n";
        os << "R[" << d << "] =\n" << ops.R_factors[d] << "\n";
      }
    }
  }
  emit(o.out, os.str());
  return 0;
}

int run_convergence(const Options& o) {
  BenchmarkConfig cfg;
  cfg.target = o.target;
  cfg.degrees = int_list(o.degrees, split(o.degrees, ',').size(), 2, "--degree");
  cfg.levels = o.levels;
  cfg.base_elements = o.base;
  cfg.weighting = parse_weight_mode(o.weighting);
  cfg.projector = parse_projector(o.projector);
  cfg.quad_points = o.quad_order;
  cfg.length = o.length;
  cfg.radius = o.radius;
  const auto rows = bezproj::run_convergence(cfg);
  std::ostringstream csv;
  write_csv(csv, rows);
  emit(o.out, csv.str());
  std::ostream& log = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  const bool global_only = cfg.projector == Projector::global;
  for (int p : cfg.degrees) {
    log << "degree " << p << ": ";
    try {
      log << "slope " << std::setprecision(4) << ladder_slope(rows, p, global_only);
    } catch (const bezproj::DomainError&) {
      log << "error vanishes, no slope";
    }
    if (const auto k = floor_onset(rows, p, global_only)) log << ", rate degradation from rung " << *k;
    log << "\n";
  }
  return 0;
}

int run_lift_normals(const Json& doc_json, const Options& o) {
  const auto doc = parse_spline<double>(doc_json);
  ProjectionOptions opt;
  opt.weighting = parse_weight_mode(o.weighting);
  opt.quad_points = o.quad_order;
  if (opt.weighting == WeightMode::exact) {
    opt.geometry_space = &doc.space;
    opt.geometry_net = &doc.net;
  }
  const auto rep = lift_normals(doc.space, doc.net, opt);
  auto j = spline_to_json(doc.space, doc.net);
  Json vs = Json::array();
  double max_mag = 0.0;
  for (std::size_t a = 0; a < rep.coefficients.rows(); ++a) {
    vs.push_back({rep.coefficients(a, 0), rep.coefficients(a, 1)});
    max_mag = std::max(max_mag, std::hypot(rep.coefficients(a, 0), rep.coefficients(a, 1)));
  }
  j["normal_vectors"] = std::move(vs);
  // sampled deviation of the lifted field from the exact unit normal
  const auto& kv = doc.space.direction(0);
  const double a = to_double(kv.knots().front()), b = to_double(kv.knots().back());
  double max_err = 0.0;
  std::vector<double> cx, cy;
  for (std::size_t i = 0; i < rep.coefficients.rows(); ++i) {
    cx.push_back(rep.coefficients(i, 0));
    cy.push_back(rep.coefficients(i, 1));
  }
  const std::vector<double>* w = doc.net.weights ? &*doc.net.weights : nullptr;
  for (int i = 0; i <= 200; ++i) {
    const Point s{a + (b - a) * i / 200.0};
    const auto n = curve_normal(doc.space, doc.net, s);
    const double vx = evaluate_field(doc.space, cx, s, w), vy = evaluate_field(doc.space, cy, s, w);
    max_err = std::max(max_err, std::hypot(vx - n[0], vy - n[1]));
  }
  emit(o.out, detail::pretty(j));
  std::ostream& log = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  log << "lift-normals: " << rep.coefficients.rows() << " control vectors, max |V_A| " << std::setprecision(8)
      << max_mag << (max_mag > 1.0 ? " (exceeds 1)" : "") << ", max normal error " << max_err << "\n";
  return 0;
}

template <Scalar T>
int run_tmesh(const std::string& cmd, const Json& doc_json, const Options& o) {
  const auto mesh = parse_tmesh<T>(doc_json);
  std::ostringstream os;
  if (cmd == "check-as") {
    const auto ext = mesh.extensions();
    const bool as = mesh.is_analysis_suitable();
    os << "extensions " << ext.size() << "\n";
    os << "analysis-suitable " << (as ? "yes" : "no") << "\n";
  } else if (cmd == "anchors") {
    for (const auto& a : mesh.anchors()) {
      os << a.index << ' ' << to_string(a.kind) << " [" << a.xlo << "," << a.xhi << "]x[" << a.ylo << "," << a.yhi
         << "]\n";
    }
  } else if (cmd == "local-kv") {
    const auto anchors = mesh.anchors();
    for (const auto& a : anchors) {
      if (o.anchor >= 0 && static_cast<long>(a.index) != o.anchor) continue;
      const auto [k1, k2] = mesh.local_knot_vectors(a);
      os << a.index << ' ' << fmt_list(k1) << ' ' << fmt_list(k2) << "\n";
    }
    if (o.anchor >= 0 && static_cast<std::size_t>(o.anchor) >= anchors.size()) {
      throw DomainError("--anchor " + std::to_string(o.anchor) + " out of range");
    }
  } else if (cmd == "extract") {
    const auto els = mesh.bezier_mesh();
    if (o.element >= 0 && static_cast<std::size_t>(o.element) >= els.size()) {
      throw DomainError("--element " + std::to_string(o.element) + " out of range");
    }
    for (const auto& el : els) {
      if (o.element >= 0 && static_cast<long>(el.index) != o.element) continue;
      os << "element " << el.index << " [" << fmt(el.lo[0]) << "," << fmt(el.hi[0]) << "]x[" << fmt(el.lo[1]) << ","
         << fmt(el.hi[1]) << "] functions";
      for (auto f : el.functions) os << ' ' << f;
      os << "\nC =\n" << mesh.element_extraction(el).C << "\n";
    }
  } else {
    throw DomainError("unknown tmesh command '" + cmd + "'");
  }
  emit(o.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bezier projection toolkit for B-splines, NURBS and T-splines"};
  app.require_subcommand(1);
  Options o;

  auto weighting = [&](CLI::App* c) {
    c->add_option("--weighting", o.weighting, "smoothing weights")
        ->check(CLI::IsMember({"approx", "approximate", "parametric", "exact", "uniform"}));
  };

  auto* op = app.add_subcommand("op", "apply a spline operation to a file");
  std::string op_name;
  op->add_option("name", op_name, "operation")
      ->required()
      ->check(CLI::IsMember({"h-refine", "h-coarsen", "p-elevate", "p-reduce", "k-roughen", "k-smooth", "reparam"}));
  op->add_option("--in", o.in, "input spline JSON")->required();
  op->add_option("--out", o.out, "output spline JSON (stdout if omitted)");
  op->add_option("--elements", o.elements, "h-refine: elements to split, e.g. \"0,2;1\"");
  op->add_option("--knots", o.knots, "knot values per direction, e.g. \"1/3,2/3;1/2\"");
  op->add_option("--by", o.by, "p-elevate/p-reduce: amount per direction");
  op->add_option("--positions", o.positions, "reparam: new interior breakpoints per direction");
  weighting(op);

  auto* ex = app.add_subcommand("extract", "print element extraction and reconstruction operators");
  ex->add_option("--in", o.in, "input spline JSON")->required();
  ex->add_option("--out", o.out, "output text file");
  ex->add_option("--element", o.element, "element index (all if omitted)");

  auto* conv = app.add_subcommand("convergence", "run a projection convergence ladder");
  conv->add_option("--target", o.target, "sine, cylinder, or an expression in x and y");
  conv->add_option("--degree", o.degrees, "degrees, comma separated");
  conv->add_option("--levels", o.levels, "number of rungs");
  conv->add_option("--base", o.base, "elements per direction on the coarsest rung");
  conv->add_option("--projector", o.projector, "projectors to run")
      ->check(CLI::IsMember({"both", "bezier", "global", "uniform-average"}));
  conv->add_option("--quad-order", o.quad_order, "Gauss points per direction");
  conv->add_option("--length", o.length, "cylinder length L");
  conv->add_option("--radius", o.radius, "cylinder radius R");
  conv->add_option("--out", o.out, "CSV output (stdout if omitted)");
  weighting(conv);

  auto* ln = app.add_subcommand("lift-normals", "project the unit normal of a planar curve");
  ln->add_option("--in", o.in, "input curve JSON")->required();
  ln->add_option("--out", o.out, "output JSON (stdout if omitted)");
  ln->add_option("--quad-order", o.quad_order, "Gauss points per direction");
  weighting(ln);

  auto* tm = app.add_subcommand("tmesh", "T-mesh queries");
  std::string tm_cmd;
  tm->add_option("command", tm_cmd, "query")->required()->check(CLI::IsMember({"check-as", "anchors", "local-kv", "extract"}));
  tm->add_option("--in", o.in, "T-mesh JSON")->required();
  tm->add_option("--out", o.out, "output text file");
  tm->add_option("--anchor", o.anchor, "anchor index for local-kv");
  tm->add_option("--element", o.element, "Bezier element index for extract");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*conv) return run_convergence(o);
    const Json doc = read_json_file(o.in);
    const bool exact = is_rational_document(doc);
    if (*op) return exact ? run_op<Rational>(op_name, doc, o) : run_op<double>(op_name, doc, o);
    if (*ex) return exact ? run_extract<Rational>(doc, o) : run_extract<double>(doc, o);
    if (*ln) return run_lift_normals(doc, o);
    if (*tm) return exact ? run_tmesh<Rational>(tm_cmd, doc, o) : run_tmesh<double>(tm_cmd, doc, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
