#ifndef BEZPROJ_KNOT_VECTOR_HPP
#define BEZPROJ_KNOT_VECTOR_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "bezproj/dense_matrix.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/scalar.hpp"

namespace bezproj {

/// Open knot vector of degree p. Knot values within the scalar snap tolerance
/// are merged on construction so multiplicities are unambiguous.
template <Scalar T>
class KnotVector {
 public:
  KnotVector() = default;
  KnotVector(int degree, std::vector<T> knots) : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 0) throw DomainError("knot vector: negative degree");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (nearly_equal(knots_[i], knots_[i - 1])) knots_[i] = knots_[i - 1];
      if (knots_[i] < knots_[i - 1]) {
        throw DomainError("knot vector: knots must be nondecreasing (index " + std::to_string(i) + ")");
      }
    }
    const std::size_t p1 = static_cast<std::size_t>(degree_) + 1;
    if (knots_.size() < 2 * p1) {
      throw DomainError("knot vector: need at least " + std::to_string(2 * p1) + " knots for degree " +
                        std::to_string(degree_));
    }
    for (std::size_t i = 1; i < p1; ++i) {
      if (knots_[i] != knots_[0]) throw DomainError("knot vector: first p+1 knots must be equal (not open)");
      if (knots_[knots_.size() - 1 - i] != knots_.back()) {
        throw DomainError("knot vector: last p+1 knots must be equal (not open)");
      }
    }
    if (!(knots_.front() < knots_.back())) throw DomainError("knot vector: empty parametric domain");
    for (const auto& [value, mult] : breakpoints()) {
      if (mult > degree_ + 1) throw DomainError("knot vector: multiplicity exceeds p+1");
    }
    for (std::size_t i = p1 - 1; i + p1 < knots_.size(); ++i)
      if (knots_[i] < knots_[i + 1]) spans_.push_back(i);
  }

  int degree() const noexcept { return degree_; }
  const std::vector<T>& knots() const noexcept { return knots_; }
  const T& operator[](std::size_t i) const { return knots_[i]; }
  std::size_t size() const noexcept { return knots_.size(); }
  /// Number of basis functions n.
  std::size_t num_functions() const noexcept { return knots_.size() - degree_ - 1; }
  std::size_t num_elements() const noexcept { return spans_.size(); }
  const T& front() const { return knots_.front(); }
  const T& back() const { return knots_.back(); }

  /// Knot index i with knots[i] < knots[i+1] that starts element e.
  std::size_t span_index(std::size_t e) const { return spans_.at(e); }
  std::size_t first_function(std::size_t e) const { return spans_.at(e) - degree_; }
  std::pair<T, T> element_bounds(std::size_t e) const {
    const auto i = spans_.at(e);
    return {knots_[i], knots_[i + 1]};
  }

  /// Distinct values with multiplicities.
  std::vector<std::pair<T, int>> breakpoints() const {
    std::vector<std::pair<T, int>> out;
    for (const T& k : knots_) {
      if (!out.empty() && out.back().first == k) {
        ++out.back().second;
      } else {
        out.emplace_back(k, 1);
      }
    }
    return out;
  }

  int multiplicity(const T& value) const {
    int m = 0;
    for (const T& k : knots_)
      if (nearly_equal(k, value)) ++m;
    return m;
  }

  /// Element containing s; knots resolve to the right-adjacent element except
  /// the right end of the domain.
  std::size_t find_element(const T& s) const {
    if (s < knots_.front() && !nearly_equal(s, knots_.front())) throw DomainError("parameter outside domain");
    if (s > knots_.back() && !nearly_equal(s, knots_.back())) throw DomainError("parameter outside domain");
    std::size_t lo = 0, hi = spans_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (s < knots_[spans_[mid]]) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return lo;
  }

  /// Local knot vector of function A (p+2 knots).
  std::vector<T> local_knots(std::size_t a) const {
    if (a >= num_functions()) throw DomainError("local_knots: function index out of range");
    return {knots_.begin() + a, knots_.begin() + a + degree_ + 2};
  }

  /// Elements on which function A is nonzero.
  std::vector<std::size_t> function_support(std::size_t a) const {
    if (a >= num_functions()) throw DomainError("function_support: function index out of range");
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < spans_.size(); ++e) {
      const std::size_t f = first_function(e);
      if (a >= f && a <= f + degree_) out.push_back(e);
    }
    return out;
  }

  template <Scalar U>
  KnotVector<U> cast() const {
    std::vector<U> k;
    k.reserve(knots_.size());
    for (const T& v : knots_) {
      if constexpr (std::is_same_v<U, double>) {
        k.push_back(to_double(v));
      } else {
        k.push_back(U(v));
      }
    }
    return KnotVector<U>(degree_, std::move(k));
  }

  friend bool operator==(const KnotVector& a, const KnotVector& b) {
    return a.degree_ == b.degree_ && a.knots_ == b.knots_;
  }

 private:
  int degree_ = 0;
  std::vector<T> knots_;
  std::vector<std::size_t> spans_;
};

/// Nonzero B-spline values at s on the given element (Cox-de Boor, triangular form).
template <Scalar T>
std::vector<T> basis_on_element(const KnotVector<T>& kv, std::size_t e, const T& s) {
  const int p = kv.degree();
  const std::size_t i = kv.span_index(e);
  std::vector<T> n(p + 1, T(0)), left(p + 1, T(0)), right(p + 1, T(0));
  n[0] = T(1);
  for (int j = 1; j <= p; ++j) {
    left[j] = s - kv[i + 1 - j];
    right[j] = kv[i + j] - s;
    T saved(0);
    for (int r = 0; r < j; ++r) {
      const T tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  return n;
}

/// First derivatives of the nonzero B-splines at s on element e.
inline std::vector<double> basis_derivative_on_element(const KnotVector<double>& kv, std::size_t e, double s) {
  const int p = kv.degree();
  std::vector<double> d(p + 1, 0.0);
  if (p == 0) return d;
  const std::size_t i = kv.span_index(e);
  // degree p-1 values on the same span
  std::vector<double> n(p, 0.0), left(p, 0.0), right(p, 0.0);
  n[0] = 1.0;
  for (int j = 1; j < p; ++j) {
    left[j] = s - kv[i + 1 - j];
    right[j] = kv[i + j] - s;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  // n[r] is N_{i-p+1+r, p-1}
  for (int r = 0; r <= p; ++r) {
    const std::size_t a = i - p + r;
    double v = 0.0;
    if (r >= 1) {
      const double den = kv[a + p] - kv[a];
      if (den > 0.0) v += p * n[r - 1] / den;
    }
    if (r <= p - 1) {
      const double den = kv[a + p + 1] - kv[a + 1];
      if (den > 0.0) v -= p * n[r] / den;
    }
    d[r] = v;
  }
  return d;
}

/// Per-element extraction operators by knot insertion, N^e = C^e B.
template <Scalar T>
std::vector<DenseMatrix<T>> extraction_operators(const KnotVector<T>& kv) {
  const int p = kv.degree();
  const std::size_t m = kv.size();
  auto U = [&](std::size_t i) -> const T& { return kv[i - 1]; };
  const std::size_t ne = kv.num_elements();
  std::vector<DenseMatrix<T>> c;
  c.reserve(ne + 1);
  c.push_back(DenseMatrix<T>::identity(p + 1));
  auto at = [](DenseMatrix<T>& mtx, std::size_t r, std::size_t col) -> T& { return mtx(r - 1, col - 1); };
  std::size_t a = p + 1, b = a + 1, nb = 1;
  std::vector<T> alphas(p + 1, T(0));
  while (b < m) {
    c.push_back(DenseMatrix<T>::identity(p + 1));
    const std::size_t i = b;
    while (b < m && U(b + 1) == U(b)) ++b;
    const int mult = static_cast<int>(b - i + 1);
    if (mult < p) {
      const T numer = U(b) - U(a);
      for (int j = p; j >= mult + 1; --j) alphas[j - mult] = numer / (U(a + j) - U(a));
      const int r = p - mult;
      for (int j = 1; j <= r; ++j) {
        const int save = r - j + 1;
        const int s = mult + j;
        auto& cur = c[nb - 1];
        for (int k = p + 1; k >= s + 1; --k) {
          const T alpha = alphas[k - s];
          for (int row = 1; row <= p + 1; ++row) {
            at(cur, row, k) = alpha * at(cur, row, k) + (T(1) - alpha) * at(cur, row, k - 1);
          }
        }
        if (b < m) {
          auto& next = c[nb];
          for (int t = 0; t <= j; ++t) at(next, save + t, save) = at(cur, p - j + 1 + t, p + 1);
        }
      }
    }
    ++nb;
    if (b < m) {
      a = b;
      b = b + 1;
    }
  }
  c.resize(ne);
  return c;
}

/// Bernstein coefficients over [a,b] of the single B-spline with local knot
/// vector g (p+2 knots), by blossoming. [a,b] must lie in one span of g or
/// outside its support.
template <Scalar T>
std::vector<T> bspline_bernstein_coefficients(const std::vector<T>& g, const T& a, const T& b) {
  if (g.size() < 2) throw DomainError("local knot vector too short");
  const int p = static_cast<int>(g.size()) - 2;
  if (!(a < b)) throw DomainError("bspline_bernstein_coefficients: need a < b");
  std::vector<T> out(p + 1, T(0));
  if (!(a < g.back()) || !(g.front() < b)) return out;
  std::vector<T> u;
  for (int i = 0; i < p; ++i) u.push_back(g.front());
  u.insert(u.end(), g.begin(), g.end());
  for (int i = 0; i < p; ++i) u.push_back(g.back());
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    if (u[i] <= a && b <= u[i + 1] && u[i] < u[i + 1]) k = i + 1;
  if (k == 0) throw InternalError("bspline_bernstein_coefficients: interval crosses a knot of the local knot vector");
  --k;
  for (int j = 0; j <= p; ++j) {
    std::vector<T> d(p + 1);
    for (int t = 0; t <= p; ++t) d[t] = (static_cast<int>(k) - p + t == p) ? T(1) : T(0);
    for (int r = 1; r <= p; ++r) {
      const T& x = (r <= p - j) ? a : b;
      for (int t = p; t >= r; --t) {
        const std::size_t i = k - p + t;
        const T alpha = (x - u[i]) / (u[i + p + 1 - r] - u[i]);
        d[t] = (T(1) - alpha) * d[t - 1] + alpha * d[t];
      }
    }
    out[j] = d[p];
  }
  return out;
}

/// Value at s of the single B-spline with local knot vector g (p+2 knots).
/// Half-open support except at the right end of `domain_end`.
template <Scalar T>
T local_bspline_value(const std::vector<T>& g, const T& s, const T& domain_end) {
  const int p = static_cast<int>(g.size()) - 2;
  std::vector<T> n(p + 1, T(0));
  for (int i = 0; i <= p; ++i) {
    const bool last = g[i + 1] == domain_end && s == domain_end && g[i] < g[i + 1];
    if ((g[i] <= s && s < g[i + 1]) || last) n[i] = T(1);
  }
  for (int k = 1; k <= p; ++k)
    for (int i = 0; i + k <= p; ++i) {
      T v(0);
      if (g[i + k] != g[i]) v += (s - g[i]) / (g[i + k] - g[i]) * n[i];
      if (g[i + k + 1] != g[i + 1]) v += (g[i + k + 1] - s) / (g[i + k + 1] - g[i + 1]) * n[i + 1];
      n[i] = v;
    }
  return n[0];
}

}  // namespace bezproj

#endif  // BEZPROJ_KNOT_VECTOR_HPP
