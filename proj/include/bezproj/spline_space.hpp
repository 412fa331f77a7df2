#ifndef BEZPROJ_SPLINE_SPACE_HPP
#define BEZPROJ_SPLINE_SPACE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bezproj/bernstein.hpp"
#include "bezproj/dense_matrix.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/knot_vector.hpp"
#include "bezproj/tensor.hpp"

namespace bezproj {

template <Scalar T>
struct Element {
  std::size_t index = 0;
  std::vector<std::size_t> dir_index;  // element index per direction
  std::vector<T> lo, hi;               // parametric bounds per direction
  std::vector<std::size_t> functions;  // supported global functions, ascending

  T volume() const {
    T v(1);
    for (std::size_t d = 0; d < lo.size(); ++d) v *= hi[d] - lo[d];
    return v;
  }
};

template <Scalar T>
struct ElementOperators {
  DenseMatrix<T> C;
  DenseMatrix<T> R;
  std::vector<DenseMatrix<T>> C_factors;
  std::vector<DenseMatrix<T>> R_factors;
};

/// Tensor-product B-spline space. Global functions and elements are numbered
/// with direction 0 varying fastest.
template <Scalar T>
class SplineSpace {
 public:
  SplineSpace() = default;
  explicit SplineSpace(std::vector<KnotVector<T>> dirs) : dirs_(std::move(dirs)) {
    if (dirs_.empty()) throw DomainError("spline space: no parametric directions");
    for (const auto& kv : dirs_) {
      extraction_.push_back(extraction_operators(kv));
      std::vector<DenseMatrix<T>> r;
      for (const auto& c : extraction_.back()) r.push_back(inverse(c));
      reconstruction_.push_back(std::move(r));
    }
  }
  SplineSpace(int degree, std::vector<T> knots) : SplineSpace(std::vector{KnotVector<T>(degree, std::move(knots))}) {}

  std::size_t dim() const noexcept { return dirs_.size(); }
  const KnotVector<T>& direction(std::size_t d) const { return dirs_.at(d); }
  const std::vector<KnotVector<T>>& directions() const noexcept { return dirs_; }
  int degree(std::size_t d = 0) const { return dirs_.at(d).degree(); }
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& kv : dirs_) out.push_back(kv.degree());
    return out;
  }

  std::vector<std::size_t> function_extents() const {
    std::vector<std::size_t> n;
    for (const auto& kv : dirs_) n.push_back(kv.num_functions());
    return n;
  }
  std::vector<std::size_t> element_extents() const {
    std::vector<std::size_t> n;
    for (const auto& kv : dirs_) n.push_back(kv.num_elements());
    return n;
  }
  std::size_t num_functions() const {
    std::size_t n = 1;
    for (const auto& kv : dirs_) n *= kv.num_functions();
    return n;
  }
  std::size_t num_elements() const {
    std::size_t n = 1;
    for (const auto& kv : dirs_) n *= kv.num_elements();
    return n;
  }
  /// Functions per element.
  std::size_t local_size() const {
    std::size_t n = 1;
    for (const auto& kv : dirs_) n *= kv.degree() + 1;
    return n;
  }

  Element<T> element(std::size_t e) const {
    if (e >= num_elements()) throw DomainError("element index out of range");
    Element<T> el;
    el.index = e;
    el.dir_index = unflatten(e, element_extents());
    std::vector<std::vector<std::size_t>> per_dir;
    for (std::size_t d = 0; d < dim(); ++d) {
      auto [a, b] = dirs_[d].element_bounds(el.dir_index[d]);
      el.lo.push_back(a);
      el.hi.push_back(b);
      std::vector<std::size_t> f;
      for (int k = 0; k <= dirs_[d].degree(); ++k) f.push_back(dirs_[d].first_function(el.dir_index[d]) + k);
      per_dir.push_back(std::move(f));
    }
    const auto n = function_extents();
    std::vector<std::size_t> local_ext;
    for (const auto& f : per_dir) local_ext.push_back(f.size());
    for (std::size_t l = 0; l < local_size(); ++l) {
      auto off = unflatten(l, local_ext);
      std::vector<std::size_t> g(dim());
      for (std::size_t d = 0; d < dim(); ++d) g[d] = per_dir[d][off[d]];
      el.functions.push_back(flatten(g, n));
    }
    return el;
  }

  std::vector<Element<T>> elements() const {
    std::vector<Element<T>> out;
    for (std::size_t e = 0; e < num_elements(); ++e) out.push_back(element(e));
    return out;
  }

  const DenseMatrix<T>& extraction_factor(std::size_t d, std::size_t e_d) const { return extraction_.at(d).at(e_d); }
  const DenseMatrix<T>& reconstruction_factor(std::size_t d, std::size_t e_d) const {
    return reconstruction_.at(d).at(e_d);
  }

  ElementOperators<T> extraction_operator(std::size_t e) const {
    const auto idx = unflatten(e, element_extents());
    ElementOperators<T> ops;
    for (std::size_t d = 0; d < dim(); ++d) {
      ops.C_factors.push_back(extraction_[d][idx[d]]);
      ops.R_factors.push_back(reconstruction_[d][idx[d]]);
    }
    ops.C = reversed_kron(ops.C_factors);
    ops.R = reversed_kron(ops.R_factors);
    return ops;
  }

  DenseMatrix<T> reconstruction_operator(std::size_t e) const { return extraction_operator(e).R; }

  std::size_t find_element(const std::vector<T>& s) const {
    require_point(s);
    std::vector<std::size_t> idx(dim());
    for (std::size_t d = 0; d < dim(); ++d) idx[d] = dirs_[d].find_element(s[d]);
    return flatten(idx, element_extents());
  }

  /// Element containing s and the values of its local functions there.
  std::pair<std::size_t, std::vector<T>> eval_basis_functions(const std::vector<T>& s) const {
    require_point(s);
    std::vector<std::size_t> idx(dim());
    std::vector<std::vector<T>> vals;
    for (std::size_t d = 0; d < dim(); ++d) {
      idx[d] = dirs_[d].find_element(s[d]);
      vals.push_back(basis_on_element(dirs_[d], idx[d], s[d]));
    }
    return {flatten(idx, element_extents()), reversed_kron(vals)};
  }

  std::vector<std::size_t> function_support(std::size_t a) const {
    if (a >= num_functions()) throw DomainError("function_support: function index out of range");
    const auto g = unflatten(a, function_extents());
    std::vector<std::vector<std::size_t>> per_dir;
    std::vector<std::size_t> ext;
    for (std::size_t d = 0; d < dim(); ++d) {
      per_dir.push_back(dirs_[d].function_support(g[d]));
      ext.push_back(per_dir.back().size());
    }
    std::size_t total = 1;
    for (auto x : ext) total *= x;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < total; ++k) {
      auto off = unflatten(k, ext);
      std::vector<std::size_t> e(dim());
      for (std::size_t d = 0; d < dim(); ++d) e[d] = per_dir[d][off[d]];
      out.push_back(flatten(e, element_extents()));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<T> local_knot_vector(std::size_t a, std::size_t dir) const {
    const auto g = unflatten(a, function_extents());
    return dirs_.at(dir).local_knots(g.at(dir));
  }

  /// Position of global function a within element e's local list.
  std::size_t local_index(std::size_t e, std::size_t a) const {
    const auto ei = unflatten(e, element_extents());
    const auto g = unflatten(a, function_extents());
    std::vector<std::size_t> off(dim()), ext(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      const auto f = dirs_[d].first_function(ei[d]);
      if (g[d] < f || g[d] > f + dirs_[d].degree()) throw DomainError("function not supported on element");
      off[d] = g[d] - f;
      ext[d] = dirs_[d].degree() + 1;
    }
    return flatten(off, ext);
  }

  template <Scalar U>
  SplineSpace<U> cast() const {
    std::vector<KnotVector<U>> d;
    for (const auto& kv : dirs_) d.push_back(kv.template cast<U>());
    return SplineSpace<U>(std::move(d));
  }

  friend bool operator==(const SplineSpace& a, const SplineSpace& b) { return a.dirs_ == b.dirs_; }

 private:
  void require_point(const std::vector<T>& s) const {
    if (s.size() != dim()) throw DomainError("parametric point has wrong dimension");
  }

  std::vector<KnotVector<T>> dirs_;
  std::vector<std::vector<DenseMatrix<T>>> extraction_;
  std::vector<std::vector<DenseMatrix<T>>> reconstruction_;
};

/// n x d_s control points with optional positive weights.
template <Scalar T>
struct ControlNet {
  DenseMatrix<T> points;
  std::optional<std::vector<T>> weights;

  bool rational() const { return weights.has_value(); }
  std::size_t size() const { return points.rows(); }
  std::size_t physical_dim() const { return points.cols(); }

  void validate(std::size_t n) const {
    if (points.rows() != n) {
      throw DomainError("control net has " + std::to_string(points.rows()) + " points, space needs " +
                        std::to_string(n));
    }
    if (weights) {
      if (weights->size() != n) throw DomainError("weights count does not match control points");
      for (std::size_t i = 0; i < n; ++i)
        if (!((*weights)[i] > T(0))) throw DomainError("weight " + std::to_string(i) + " is not positive");
    }
  }

  /// Rows {w P, w}; weight 1 appended when polynomial.
  DenseMatrix<T> homogeneous() const {
    DenseMatrix<T> h(points.rows(), points.cols() + 1);
    for (std::size_t i = 0; i < points.rows(); ++i) {
      const T w = weights ? (*weights)[i] : T(1);
      for (std::size_t j = 0; j < points.cols(); ++j) h(i, j) = w * points(i, j);
      h(i, points.cols()) = w;
    }
    return h;
  }

  static ControlNet from_homogeneous(const DenseMatrix<T>& h, bool rational = true) {
    ControlNet net;
    const std::size_t ds = h.cols() - 1;
    net.points = DenseMatrix<T>(h.rows(), ds);
    std::vector<T> w(h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i) {
      w[i] = h(i, ds);
      if (w[i] == T(0)) throw EvaluationError("zero weight in homogeneous control point");
      for (std::size_t j = 0; j < ds; ++j) net.points(i, j) = h(i, j) / w[i];
    }
    if (rational) net.weights = std::move(w);
    return net;
  }

  template <Scalar U>
  ControlNet<U> cast() const {
    ControlNet<U> out;
    out.points = points.template cast<U>();
    if (weights) {
      std::vector<U> w;
      for (const T& v : *weights) {
        if constexpr (std::is_same_v<U, double>) {
          w.push_back(to_double(v));
        } else {
          w.push_back(U(v));
        }
      }
      out.weights = std::move(w);
    }
    return out;
  }
};

/// Point on a B-spline or NURBS object.
template <Scalar T>
std::vector<T> evaluate(const SplineSpace<T>& space, const ControlNet<T>& net, const std::vector<T>& s) {
  auto [e, vals] = space.eval_basis_functions(s);
  const auto el = space.element(e);
  const std::size_t ds = net.physical_dim();
  std::vector<T> x(ds, T(0));
  T w(0);
  for (std::size_t l = 0; l < vals.size(); ++l) {
    const std::size_t a = el.functions[l];
    const T wa = net.weights ? (*net.weights)[a] : T(1);
    w += wa * vals[l];
    for (std::size_t j = 0; j < ds; ++j) x[j] += wa * vals[l] * net.points(a, j);
  }
  if (w == T(0)) throw EvaluationError("weight function vanishes at evaluation point");
  for (auto& v : x) v /= w;
  return x;
}

/// Scalar field sum_A c_A N_A (or rational sum when weights are given).
template <Scalar T>
T evaluate_field(const SplineSpace<T>& space, const std::vector<T>& coeffs, const std::vector<T>& s,
                 const std::vector<T>* weights = nullptr) {
  auto [e, vals] = space.eval_basis_functions(s);
  const auto el = space.element(e);
  T v(0), w(0);
  for (std::size_t l = 0; l < vals.size(); ++l) {
    const std::size_t a = el.functions[l];
    const T wa = weights ? (*weights)[a] : T(1);
    v += coeffs[a] * wa * vals[l];
    w += wa * vals[l];
  }
  return v / w;
}

/// Uniform open knot vector with `elements` spans on [a,b].
inline KnotVector<double> uniform_knot_vector(int p, std::size_t elements, double a = 0.0, double b = 1.0) {
  std::vector<double> k(p + 1, a);
  for (std::size_t i = 1; i < elements; ++i) k.push_back(a + (b - a) * static_cast<double>(i) / elements);
  k.insert(k.end(), p + 1, b);
  return KnotVector<double>(p, std::move(k));
}

}  // namespace bezproj

#endif  // BEZPROJ_SPLINE_SPACE_HPP
