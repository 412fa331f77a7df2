#ifndef BEZPROJ_PROJECTION_HPP
#define BEZPROJ_PROJECTION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "bezproj/bernstein.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/quadrature.hpp"
#include "bezproj/spline_space.hpp"
#include "bezproj/tensor.hpp"

namespace bezproj {

using Point = std::vector<double>;

/// Function of the parametric point with `components` outputs.
struct TargetFunction {
  std::size_t components = 1;
  std::function<std::vector<double>(const Point&)> eval;
  // Polynomial degree per direction when known; sizes quadrature exactly.
  std::optional<int> polynomial_degree;

  static TargetFunction scalar(std::function<double(const Point&)> f, std::optional<int> degree = std::nullopt) {
    TargetFunction t;
    t.eval = [f = std::move(f)](const Point& s) { return std::vector<double>{f(s)}; };
    t.polynomial_degree = degree;
    return t;
  }

  std::vector<double> operator()(const Point& s) const {
    auto v = eval(s);
    if (v.size() != components) throw EvaluationError("target returned wrong number of components");
    for (double x : v)
      if (!std::isfinite(x)) throw EvaluationError("target function produced a non-finite value");
    return v;
  }
};

/// f composed with the geometric map, f(x(s)).
inline TargetFunction on_geometry(std::function<std::vector<double>(const Point&)> f, std::size_t components,
                                  const SplineSpace<double>& space, const ControlNet<double>& net) {
  TargetFunction t;
  t.components = components;
  t.eval = [f = std::move(f), &space, &net](const Point& s) { return f(evaluate(space, net, s)); };
  return t;
}

enum class WeightMode { approximate, parametric, exact, uniform };

inline std::string to_string(WeightMode m) {
  switch (m) {
    case WeightMode::approximate: return "approx";
    case WeightMode::parametric: return "parametric";
    case WeightMode::exact: return "exact";
    case WeightMode::uniform: return "uniform";
  }
  return "?";
}

inline WeightMode parse_weight_mode(const std::string& s) {
  if (s == "approx" || s == "approximate") return WeightMode::approximate;
  if (s == "parametric") return WeightMode::parametric;
  if (s == "exact") return WeightMode::exact;
  if (s == "uniform") return WeightMode::uniform;
  throw DomainError("unknown weighting mode '" + s + "'");
}

/// Parametric point of element e at biunit coordinates xi.
inline Point element_map(const Element<double>& el, const Point& xi) {
  Point s(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d) s[d] = el.lo[d] + 0.5 * (xi[d] + 1.0) * (el.hi[d] - el.lo[d]);
  return s;
}

/// Gauss points per direction: explicit request, else exact for declared
/// polynomial targets, else p+3.
inline int quadrature_points(int p, const TargetFunction& f, int requested) {
  const int minimum = (p + 2) / 2;
  if (requested > 0) {
    if (requested < minimum) throw DomainError("quadrature order below ceil((p+1)/2)");
    return requested;
  }
  if (f.polynomial_degree) return std::max(minimum, (p + *f.polynomial_degree + 2) / 2);
  return p + 3;
}

namespace detail {

inline std::vector<double> bernstein_tensor(const std::vector<int>& p, const Point& xi) {
  std::vector<std::vector<double>> v;
  for (std::size_t d = 0; d < p.size(); ++d) v.push_back(eval_basis<double>(p[d], xi[d]));
  return reversed_kron(v);
}

inline DenseMatrix<double> gramian_inverse_tensor(const std::vector<int>& p) {
  std::vector<DenseMatrix<double>> f;
  for (int q : p) f.push_back(gramian_inverse<double>(q));
  return reversed_kron(f);
}

inline int max_degree(const std::vector<int>& p) { return *std::max_element(p.begin(), p.end()); }

}  // namespace detail

/// beta^e = G^{-1} b, b_i = int B_i (f o phi_e) over the biunit element.
/// Returns (local size) x components.
inline DenseMatrix<double> local_bernstein_projection(const TargetFunction& f, const Element<double>& el,
                                                      const std::vector<int>& degrees, int quad_points = 0) {
  const int nq = quadrature_points(detail::max_degree(degrees), f, quad_points);
  const auto rule = tensor_gauss(std::vector<int>(degrees.size(), nq));
  std::size_t nb = 1;
  for (int p : degrees) nb *= p + 1;
  DenseMatrix<double> b(nb, f.components);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto B = detail::bernstein_tensor(degrees, rule.points[q]);
    const auto fv = f(element_map(el, rule.points[q]));
    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t c = 0; c < f.components; ++c) b(i, c) += rule.weights[q] * B[i] * fv[c];
  }
  return detail::gramian_inverse_tensor(degrees) * b;
}

/// lambda^e = (R^e)^T beta^e.
inline DenseMatrix<double> local_spline_coefficients(const DenseMatrix<double>& beta, const DenseMatrix<double>& R) {
  if (R.rows() != beta.rows()) throw DomainError("local_spline_coefficients: dimension mismatch");
  return R.transpose() * beta;
}

/// Jacobian dx/ds (d_s x d_p) of the geometric map.
inline DenseMatrix<double> geometry_jacobian(const SplineSpace<double>& space, const ControlNet<double>& net,
                                             const Point& s) {
  const std::size_t dp = space.dim();
  const std::size_t ds = net.physical_dim();
  std::vector<std::size_t> idx(dp);
  std::vector<std::vector<double>> val(dp), der(dp);
  for (std::size_t d = 0; d < dp; ++d) {
    idx[d] = space.direction(d).find_element(s[d]);
    val[d] = basis_on_element(space.direction(d), idx[d], s[d]);
    der[d] = basis_derivative_on_element(space.direction(d), idx[d], s[d]);
  }
  const auto el = space.element(flatten(idx, space.element_extents()));
  const auto N = reversed_kron(val);
  std::vector<std::vector<double>> dN;
  for (std::size_t k = 0; k < dp; ++k) {
    auto f = val;
    f[k] = der[k];
    dN.push_back(reversed_kron(f));
  }
  std::vector<double> A(ds, 0.0);
  double w = 0.0;
  DenseMatrix<double> dA(ds, dp);
  std::vector<double> dw(dp, 0.0);
  for (std::size_t l = 0; l < N.size(); ++l) {
    const std::size_t a = el.functions[l];
    const double wa = net.weights ? (*net.weights)[a] : 1.0;
    w += wa * N[l];
    for (std::size_t j = 0; j < ds; ++j) A[j] += wa * N[l] * net.points(a, j);
    for (std::size_t k = 0; k < dp; ++k) {
      dw[k] += wa * dN[k][l];
      for (std::size_t j = 0; j < ds; ++j) dA(j, k) += wa * dN[k][l] * net.points(a, j);
    }
  }
  DenseMatrix<double> J(ds, dp);
  for (std::size_t j = 0; j < ds; ++j)
    for (std::size_t k = 0; k < dp; ++k) J(j, k) = (dA(j, k) - dw[k] * A[j] / w) / w;
  return J;
}

/// Area/length element sqrt(det(J^T J)).
inline double jacobian_measure(const DenseMatrix<double>& J) {
  const auto g = J.transpose() * J;
  if (g.rows() == 1) return std::sqrt(g(0, 0));
  if (g.rows() == 2) return std::sqrt(std::max(0.0, g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)));
  if (g.rows() == 3) {
    const double det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
                       g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
                       g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
    return std::sqrt(std::max(0.0, det));
  }
  throw DomainError("jacobian_measure: unsupported parametric dimension");
}

/// omega_A^e for every element; weights[e][l] belongs to element e's l-th function.
/// Quadrature-free except in exact mode, which integrates N_A |J| over the
/// element (|J| = 1 without a geometry).
template <Scalar T>
std::vector<std::vector<T>> smoothing_weights(const SplineSpace<T>& space, WeightMode mode,
                                              const SplineSpace<double>* geo_space = nullptr,
                                              const ControlNet<double>* geo_net = nullptr) {
  const std::size_t ne = space.num_elements();
  std::vector<std::vector<T>> raw(ne);
  std::vector<T> total(space.num_functions(), T(0));
  std::vector<Element<T>> els = space.elements();
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = els[e];
    const std::size_t nl = el.functions.size();
    raw[e].assign(nl, T(0));
    if (mode == WeightMode::uniform) {
      for (auto& v : raw[e]) v = T(1);
    } else if (mode == WeightMode::exact) {
      if constexpr (ScalarTraits<T>::exact) {
        throw DomainError("exact weighting needs floating point");
      } else {
        const auto degs = space.degrees();
        int nq = detail::max_degree(degs) + 2;
        const auto rule = tensor_gauss(std::vector<int>(space.dim(), nq));
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto s = element_map(el, rule.points[q]);
          std::vector<std::vector<double>> v;
          for (std::size_t d = 0; d < space.dim(); ++d)
            v.push_back(basis_on_element(space.direction(d), el.dir_index[d], s[d]));
          const auto N = reversed_kron(v);
          double jac = el.volume() / std::pow(2.0, static_cast<double>(space.dim()));
          if (geo_space && geo_net) jac *= jacobian_measure(geometry_jacobian(*geo_space, *geo_net, s));
          for (std::size_t l = 0; l < nl; ++l) raw[e][l] += rule.weights[q] * jac * N[l];
        }
      }
    } else {
      const auto ops = space.extraction_operator(e);
      T scale(1);
      if (mode == WeightMode::parametric) {
        scale = el.volume();
        for (int p : space.degrees()) scale /= T(p + 1);
      }
      for (std::size_t l = 0; l < nl; ++l) {
        T s(0);
        for (std::size_t j = 0; j < ops.C.cols(); ++j) s += ops.C(l, j);
        raw[e][l] = scale * s;
      }
    }
    for (std::size_t l = 0; l < nl; ++l) total[el.functions[l]] += raw[e][l];
  }
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t l = 0; l < raw[e].size(); ++l) raw[e][l] /= total[els[e].functions[l]];
  return raw;
}

/// omega_A^e for one function, keyed by element.
template <Scalar T>
std::vector<std::pair<std::size_t, T>> smoothing_weights(const SplineSpace<T>& space, std::size_t a, WeightMode mode) {
  const auto all = smoothing_weights(space, mode);
  std::vector<std::pair<std::size_t, T>> out;
  for (std::size_t e : space.function_support(a)) out.emplace_back(e, all[e][space.local_index(e, a)]);
  return out;
}

struct ProjectionReport {
  std::vector<DenseMatrix<double>> beta;    // per element, Bernstein coefficients
  std::vector<DenseMatrix<double>> lambda;  // per element, local spline coefficients
  std::vector<std::vector<double>> omega;   // per element, smoothing weights
  DenseMatrix<double> coefficients;         // n x components
  std::optional<double> l2_error;
};

struct ProjectionOptions {
  WeightMode weighting = WeightMode::approximate;
  int quad_points = 0;
  const SplineSpace<double>* geometry_space = nullptr;  // for exact weighting
  const ControlNet<double>* geometry_net = nullptr;
};

namespace detail {

inline double weight_function(const SplineSpace<double>& space, const std::vector<double>& w, const Point& s) {
  auto [e, vals] = space.eval_basis_functions(s);
  const auto el = space.element(e);
  double v = 0.0;
  for (std::size_t l = 0; l < vals.size(); ++l) v += w[el.functions[l]] * vals[l];
  return v;
}

}  // namespace detail

/// Bezier projection onto the space (rational when weights are given).
inline ProjectionReport bezier_project(const TargetFunction& f, const SplineSpace<double>& space,
                                       const std::vector<double>* weights = nullptr,
                                       const ProjectionOptions& opt = {}) {
  if (weights && weights->size() != space.num_functions()) throw DomainError("weights do not match space");
  // unit weights: the rational basis is the polynomial one
  if (weights && std::all_of(weights->begin(), weights->end(), [](double w) { return w == 1.0; })) weights = nullptr;
  TargetFunction g = f;
  if (weights) {
    g.eval = [&f, &space, weights](const Point& s) {
      auto v = f(s);
      const double w = detail::weight_function(space, *weights, s);
      for (auto& x : v) x *= w;
      return v;
    };
    g.polynomial_degree.reset();
  }
  ProjectionReport rep;
  const auto degs = space.degrees();
  const std::size_t ne = space.num_elements();
  rep.omega = smoothing_weights(space, opt.weighting, opt.geometry_space, opt.geometry_net);
  rep.coefficients = DenseMatrix<double>(space.num_functions(), f.components);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto el = space.element(e);
    rep.beta.push_back(local_bernstein_projection(g, el, degs, opt.quad_points));
    rep.lambda.push_back(local_spline_coefficients(rep.beta.back(), space.extraction_operator(e).R));
  }
  // fixed summation order per function: ascending element index
  for (std::size_t e = 0; e < ne; ++e) {
    const auto el = space.element(e);
    for (std::size_t l = 0; l < el.functions.size(); ++l)
      for (std::size_t c = 0; c < f.components; ++c)
        rep.coefficients(el.functions[l], c) += rep.omega[e][l] * rep.lambda[e](l, c);
  }
  if (weights) {
    for (std::size_t a = 0; a < space.num_functions(); ++a)
      for (std::size_t c = 0; c < f.components; ++c) rep.coefficients(a, c) /= (*weights)[a];
  }
  return rep;
}

/// Global L2 projection in the parametric inner product (oracle).
inline DenseMatrix<double> global_l2_project(const TargetFunction& f, const SplineSpace<double>& space,
                                             const std::vector<double>* weights = nullptr, int quad_points = 0) {
  const std::size_t n = space.num_functions();
  const auto degs = space.degrees();
  const int nq = quadrature_points(detail::max_degree(degs), f, quad_points);
  const auto rule = tensor_gauss(std::vector<int>(space.dim(), nq));
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, f.components);
  for (std::size_t e = 0; e < space.num_elements(); ++e) {
    const auto el = space.element(e);
    const double jac = el.volume() / std::pow(2.0, static_cast<double>(space.dim()));
    const std::size_t nl = el.functions.size();
    std::vector<double> me(nl * nl, 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto s = element_map(el, rule.points[q]);
      // evaluate with the element's own functions so knots are not ambiguous
      std::vector<std::vector<double>> v;
      for (std::size_t d = 0; d < space.dim(); ++d)
        v.push_back(basis_on_element(space.direction(d), el.dir_index[d], s[d]));
      auto N = reversed_kron(v);
      if (weights) {
        double w = 0.0;
        for (std::size_t l = 0; l < N.size(); ++l) {
          N[l] *= (*weights)[el.functions[l]];
          w += N[l];
        }
        for (auto& x : N) x /= w;
      }
      const auto fv = f(s);
      const double wq = rule.weights[q] * jac;
      for (std::size_t i = 0; i < nl; ++i) {
        for (std::size_t j = 0; j < nl; ++j) me[i * nl + j] += wq * N[i] * N[j];
        for (std::size_t c = 0; c < f.components; ++c) rhs(el.functions[i], c) += wq * N[i] * fv[c];
      }
    }
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < nl; ++j)
        trip.emplace_back(static_cast<int>(el.functions[i]), static_cast<int>(el.functions[j]), me[i * nl + j]);
  }
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
  if (solver.info() != Eigen::Success) throw InternalError("global_l2_project: Gram matrix factorization failed");
  Eigen::MatrixXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw InternalError("global_l2_project: solve failed");
  DenseMatrix<double> out(n, f.components);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < f.components; ++c) out(a, c) = x(a, c);
  return out;
}

/// ||f - sum_A c_A R_A|| over the parametric domain.
inline double l2_error(const TargetFunction& f, const SplineSpace<double>& space, const DenseMatrix<double>& coeffs,
                       const std::vector<double>* weights = nullptr, int quad_points = 0) {
  const auto degs = space.degrees();
  int nq = quad_points > 0 ? quad_points : detail::max_degree(degs) + 3;
  nq = std::max(nq, detail::max_degree(degs) + 2);
  const auto rule = tensor_gauss(std::vector<int>(space.dim(), nq));
  double err = 0.0;
  for (std::size_t e = 0; e < space.num_elements(); ++e) {
    const auto el = space.element(e);
    const double jac = el.volume() / std::pow(2.0, static_cast<double>(space.dim()));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto s = element_map(el, rule.points[q]);
      std::vector<std::vector<double>> v;
      for (std::size_t d = 0; d < space.dim(); ++d)
        v.push_back(basis_on_element(space.direction(d), el.dir_index[d], s[d]));
      auto N = reversed_kron(v);
      double w = 1.0;
      if (weights) {
        w = 0.0;
        for (std::size_t l = 0; l < N.size(); ++l) {
          N[l] *= (*weights)[el.functions[l]];
          w += N[l];
        }
      }
      const auto fv = f(s);
      for (std::size_t c = 0; c < f.components; ++c) {
        double u = 0.0;
        for (std::size_t l = 0; l < N.size(); ++l) u += coeffs(el.functions[l], c) * N[l];
        const double r = fv[c] - u / w;
        err += rule.weights[q] * jac * r * r;
      }
    }
  }
  return std::sqrt(err);
}

/// Parametric L2 distance between two spline maps over the elements of b.
inline double spline_distance(const SplineSpace<double>& a, const ControlNet<double>& net_a,
                              const SplineSpace<double>& b, const ControlNet<double>& net_b, int quad_points = 0) {
  if (a.dim() != b.dim() || net_a.physical_dim() != net_b.physical_dim()) {
    throw DomainError("spline_distance: incompatible splines");
  }
  const int nq = quad_points > 0 ? quad_points : std::max(detail::max_degree(a.degrees()), detail::max_degree(b.degrees())) + 2;
  const auto rule = tensor_gauss(std::vector<int>(b.dim(), nq));
  double err = 0.0;
  for (std::size_t e = 0; e < b.num_elements(); ++e) {
    const auto el = b.element(e);
    const double jac = el.volume() / std::pow(2.0, static_cast<double>(b.dim()));
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto s = element_map(el, rule.points[q]);
      const auto xa = evaluate(a, net_a, s);
      const auto xb = evaluate(b, net_b, s);
      for (std::size_t c = 0; c < xa.size(); ++c) err += rule.weights[q] * jac * (xa[c] - xb[c]) * (xa[c] - xb[c]);
    }
  }
  return std::sqrt(err);
}

/// Unit normal of a planar curve (tangent rotated by +90 degrees).
inline std::vector<double> curve_normal(const SplineSpace<double>& space, const ControlNet<double>& net, const Point& s) {
  const auto J = geometry_jacobian(space, net, s);
  const double tx = J(0, 0), ty = J(1, 0);
  const double len = std::hypot(tx, ty);
  if (!(len > 1e-14)) throw EvaluationError("degenerate geometry: vanishing tangent");
  return {-ty / len, tx / len};
}

/// Control vectors V_A with n ~ sum V_A R_A for a planar curve.
inline ProjectionReport lift_normals(const SplineSpace<double>& space, const ControlNet<double>& net,
                                     const ProjectionOptions& opt = {}) {
  if (space.dim() != 1 || net.physical_dim() != 2) throw DomainError("lift_normals: need a planar curve");
  TargetFunction n;
  n.components = 2;
  n.eval = [&space, &net](const Point& s) { return curve_normal(space, net, s); };
  return bezier_project(n, space, net.weights ? &*net.weights : nullptr, opt);
}

}  // namespace bezproj

#endif  // BEZPROJ_PROJECTION_HPP
