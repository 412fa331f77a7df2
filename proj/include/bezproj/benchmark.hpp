#ifndef BEZPROJ_BENCHMARK_HPP
#define BEZPROJ_BENCHMARK_HPP

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bezproj/errors.hpp"
#include "bezproj/expr.hpp"
#include "bezproj/io.hpp"
#include "bezproj/projection.hpp"
#include "bezproj/spline_ops.hpp"
#include "bezproj/spline_space.hpp"

namespace bezproj {

enum class Projector { both, bezier, global, uniform_average };

inline Projector parse_projector(const std::string& s) {
  if (s == "both") return Projector::both;
  if (s == "bezier") return Projector::bezier;
  if (s == "global") return Projector::global;
  if (s == "uniform-average" || s == "uniform") return Projector::uniform_average;
  throw DomainError("unknown projector '" + s + "'");
}

struct BenchmarkConfig {
  std::string target = "sine";  // sine, cylinder (alias govindjee), or an expression in x (and y)
  std::vector<int> degrees{2};
  int levels = 5;
  std::size_t base_elements = 8;  // per direction on the coarsest rung
  WeightMode weighting = WeightMode::approximate;
  Projector projector = Projector::both;
  int quad_points = 0;
  double length = 2.0;  // cylinder length
  double radius = 1.0;  // cylinder radius

  void validate() const {
    if (levels < 2) throw DomainError("benchmark: levels must be at least 2");
    if (degrees.empty()) throw DomainError("benchmark: no degrees");
    for (int p : degrees)
      if (p < 1 || p > 5) throw DomainError("benchmark: degree " + std::to_string(p) + " outside [1,5]");
    if (base_elements < 1) throw DomainError("benchmark: need at least one element");
  }
};

struct LadderRow {
  int degree = 0;
  double h = 0.0;
  std::size_t n_elements = 0;
  std::optional<double> error_bezier;
  std::optional<double> error_global;
  std::optional<double> rate_bezier;
  std::optional<double> rate_global;
};

inline double observed_rate(double e0, double e1, double h0, double h1) {
  return std::log(e0 / e1) / std::log(h0 / h1);
}

/// Least-squares slope of log e against log h.
inline double regression_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw DomainError("regression_slope: need two or more points");
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Quarter cylinder of radius R and length L: a quadratic NURBS arc in the
/// x-z plane times a line in y, raised to degree p and split into n x n elements.
inline SplineDocument<double> quarter_cylinder_geometry(int p, std::size_t n, double R = 1.0, double L = 2.0) {
  if (p < 2) throw DomainError("quarter_cylinder_geometry: degree must be at least 2");
  const double c = std::sqrt(2.0) * R;
  SplineSpace<double> space({KnotVector<double>(2, {0, 0, 0, 1, 1, 1}), KnotVector<double>(1, {0, 0, 1, 1})});
  ControlNet<double> net;
  net.points = DenseMatrix<double>(6, 3);
  const double arc[3][2] = {{0.0, 0.0}, {c / 2, c / 2}, {c, 0.0}};
  const double w[3] = {1.0, std::sqrt(2.0) / 2, 1.0};
  std::vector<double> weights;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = static_cast<std::size_t>(i + 3 * j);
      net.points(a, 0) = arc[i][0];
      net.points(a, 1) = j * L;
      net.points(a, 2) = arc[i][1];
      weights.push_back(w[i]);
    }
  net.weights = weights;
  auto r = p_elevate(space, net, {p - 2, p - 1});
  std::size_t cur = 1;
  while (cur < n) {
    r = h_refine(r.space, r.net, all_elements(r.space));
    cur *= 2;
  }
  if (cur != n) throw DomainError("quarter_cylinder_geometry: n must be a power of two");
  return {r.space, r.net};
}

namespace detail {

struct Rung {
  SplineSpace<double> space;
  std::optional<ControlNet<double>> geometry;
  TargetFunction f;
  double h;
};

inline std::vector<LadderRow> run_rungs(const BenchmarkConfig& cfg, int p, const std::vector<Rung>& rungs) {
  std::vector<LadderRow> rows;
  const bool do_bezier = cfg.projector != Projector::global;
  const bool do_global = cfg.projector == Projector::both || cfg.projector == Projector::global;
  ProjectionOptions opt;
  opt.weighting = cfg.projector == Projector::uniform_average ? WeightMode::uniform : cfg.weighting;
  opt.quad_points = cfg.quad_points;
  for (const auto& r : rungs) {
    const std::vector<double>* w = r.geometry && r.geometry->weights ? &*r.geometry->weights : nullptr;
    if (opt.weighting == WeightMode::exact && r.geometry) {
      opt.geometry_space = &r.space;
      opt.geometry_net = &*r.geometry;
    } else {
      opt.geometry_space = nullptr;
      opt.geometry_net = nullptr;
    }
    LadderRow row;
    row.degree = p;
    row.h = r.h;
    row.n_elements = r.space.num_elements();
    if (do_bezier) {
      const auto rep = bezier_project(r.f, r.space, w, opt);
      row.error_bezier = l2_error(r.f, r.space, rep.coefficients, w, cfg.quad_points);
    }
    if (do_global) {
      const auto c = global_l2_project(r.f, r.space, w, cfg.quad_points);
      row.error_global = l2_error(r.f, r.space, c, w, cfg.quad_points);
    }
    if (!rows.empty()) {
      const auto& prev = rows.back();
      // no rate once the error vanishes, e.g. when the target lies in the space
      const auto rate = [&](const std::optional<double>& e0, const std::optional<double>& e1) -> std::optional<double> {
        if (!e0 || !e1 || !(*e0 > 0) || !(*e1 > 0)) return std::nullopt;
        return observed_rate(*e0, *e1, prev.h, row.h);
      };
      row.rate_bezier = rate(prev.error_bezier, row.error_bezier);
      row.rate_global = rate(prev.error_global, row.error_global);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

/// Runs the mesh ladder for every degree. Rung k has base_elements * 2^k
/// elements per direction.
inline std::vector<LadderRow> run_convergence(const BenchmarkConfig& cfg) {
  cfg.validate();
  std::vector<LadderRow> out;
  for (int p : cfg.degrees) {
    std::vector<detail::Rung> rungs;
    if (cfg.target == "cylinder" || cfg.target == "govindjee") {
      const double R = cfg.radius, L = cfg.length;
      std::vector<SplineDocument<double>> geos;
      for (int k = 0; k < cfg.levels; ++k) {
        const std::size_t n = cfg.base_elements << k;
        geos.push_back(quarter_cylinder_geometry(p, n, R, L));
      }
      rungs.reserve(geos.size());
      for (std::size_t k = 0; k < geos.size(); ++k) {
        detail::Rung r{geos[k].space, geos[k].net, {}, 1.0 / static_cast<double>(cfg.base_elements << k)};
        rungs.push_back(std::move(r));
      }
      // bind after the vector stops moving
      for (auto& r : rungs) {
        r.f = on_geometry(
            [R, L](const Point& x) {
              return std::vector<double>{std::sin(3 * std::numbers::pi * x[0] / (std::sqrt(2.0) * R)) *
                                         std::sin(2 * std::numbers::pi * x[1] / L)};
            },
            1, r.space, *r.geometry);
      }
    } else {
      TargetFunction f;
      std::size_t dim = 1;
      if (cfg.target == "sine") {
        f = TargetFunction::scalar([](const Point& s) { return std::sin(2 * std::numbers::pi * s[0]); });
      } else {
        Expression ex(cfg.target);
        if (ex.arity() > 2) throw DomainError("benchmark: expressions may use x and y only");
        dim = ex.arity();
        f = TargetFunction::scalar([ex](const Point& s) { return ex(s); });
      }
      for (int k = 0; k < cfg.levels; ++k) {
        const std::size_t n = cfg.base_elements << k;
        std::vector<KnotVector<double>> dirs(dim, uniform_knot_vector(p, n));
        rungs.push_back({SplineSpace<double>(std::move(dirs)), std::nullopt, f, 1.0 / static_cast<double>(n)});
      }
    }
    auto rows = detail::run_rungs(cfg, p, rungs);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<LadderRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string();
    std::ostringstream s;
    s << std::setprecision(17) << *v;
    return s.str();
  };
  os << "degree,h,n_elements,error_bezier,error_global,rate_bezier,rate_global\n";
  for (const auto& r : rows) {
    os << r.degree << ',' << cell(r.h) << ',' << r.n_elements << ',' << cell(r.error_bezier) << ','
       << cell(r.error_global) << ',' << cell(r.rate_bezier) << ',' << cell(r.rate_global) << '\n';
  }
}

/// Slope over the rows of one degree; bezier errors unless `global` is set.
inline double ladder_slope(const std::vector<LadderRow>& rows, int degree, bool global = false,
                           std::size_t first = 0, std::size_t count = std::numeric_limits<std::size_t>::max()) {
  std::vector<double> h, e;
  std::size_t k = 0;
  for (const auto& r : rows) {
    if (r.degree != degree) continue;
    const auto& err = global ? r.error_global : r.error_bezier;
    if (k >= first && k - first < count && err && *err > 0) {
      h.push_back(r.h);
      e.push_back(*err);
    }
    ++k;
  }
  return regression_slope(h, e);
}

/// First rung whose step rate falls more than `slack` below p+1: the onset
/// of the conditioning floor. Empty when the ladder stays optimal.
inline std::optional<std::size_t> floor_onset(const std::vector<LadderRow>& rows, int degree, bool global = false,
                                              double slack = 0.5) {
  std::size_t k = 0;
  for (const auto& r : rows) {
    if (r.degree != degree) continue;
    const auto& rate = global ? r.rate_global : r.rate_bezier;
    if (rate && *rate < degree + 1 - slack) return k;
    ++k;
  }
  return std::nullopt;
}

}  // namespace bezproj

#endif  // BEZPROJ_BENCHMARK_HPP
