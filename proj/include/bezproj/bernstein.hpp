#ifndef BEZPROJ_BERNSTEIN_HPP
#define BEZPROJ_BERNSTEIN_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bezproj/dense_matrix.hpp"
#include "bezproj/diagnostics.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/scalar.hpp"

namespace bezproj {

/// Exact binomial coefficient, zero outside 0 <= k <= n.
inline boost::multiprecision::cpp_int binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  boost::multiprecision::cpp_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace detail {

template <Scalar T>
T binom(int n, int k) {
  if constexpr (ScalarTraits<T>::exact) {
    return T(binomial(n, k));
  } else {
    return binomial(n, k).template convert_to<double>();
  }
}

template <Scalar T>
T ipow(T base, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline void require_degree(int p, const char* who) {
  if (p < 0) throw DomainError(std::string(who) + ": negative degree");
  check_degree(p);
}

}  // namespace detail

/// b_i^n(t) on [0,1].
template <Scalar T>
T bernstein_unit(int n, int i, const T& t) {
  if (i < 0 || i > n) return T(0);
  return detail::binom<T>(n, i) * detail::ipow<T>(T(1) - t, n - i) * detail::ipow<T>(t, i);
}

/// [B_1^p(xi), ..., B_{p+1}^p(xi)] over the biunit interval.
template <Scalar T>
std::vector<T> eval_basis(int p, const T& xi) {
  detail::require_degree(p, "eval_basis");
  bool outside;
  if constexpr (ScalarTraits<T>::exact) {
    outside = xi < T(-1) || xi > T(1);
  } else {
    outside = !(xi >= -1.0 - 1e-14 && xi <= 1.0 + 1e-14);
  }
  if (outside) throw DomainError("eval_basis: xi outside [-1,1]");
  const T t = (xi + T(1)) / T(2);
  std::vector<T> b(p + 1);
  for (int i = 0; i <= p; ++i) b[i] = bernstein_unit<T>(p, i, t);
  return b;
}

inline std::vector<double> eval_basis(int p, double xi) { return eval_basis<double>(p, xi); }

/// Derivatives d/dxi of the biunit Bernstein basis.
inline std::vector<double> eval_basis_derivative(int p, double xi) {
  std::vector<double> d(p + 1, 0.0);
  if (p == 0) return d;
  auto lower = eval_basis<double>(p - 1, xi);
  // d/dxi = (p/2) (B_{i-1}^{p-1} - B_i^{p-1})
  for (int i = 0; i <= p; ++i) {
    const double left = i > 0 ? lower[i - 1] : 0.0;
    const double right = i < p ? lower[i] : 0.0;
    d[i] = 0.5 * p * (left - right);
  }
  return d;
}

template <Scalar T = double>
DenseMatrix<T> gramian(int p) {
  detail::require_degree(p, "gramian");
  DenseMatrix<T> g(p + 1, p + 1);
  for (int j = 0; j <= p; ++j)
    for (int k = 0; k <= p; ++k) {
      Rational v(binomial(p, j) * binomial(p, k), binomial(2 * p, j + k));
      v *= Rational(2, 2 * p + 1);
      g(j, k) = ScalarTraits<T>::exact ? T(v) : T(to_double(v));
    }
  return g;
}

/// Closed-form inverse of the Bernstein Gramian (dual basis coefficients).
template <Scalar T = double>
DenseMatrix<T> gramian_inverse(int p) {
  detail::require_degree(p, "gramian_inverse");
  DenseMatrix<T> g(p + 1, p + 1);
  for (int j = 1; j <= p + 1; ++j)
    for (int k = 1; k <= p + 1; ++k) {
      boost::multiprecision::cpp_int sum = 0;
      for (int i = 1; i <= std::min(j, k); ++i) {
        sum += (2 * i - 1) * binomial(p - i + 1, p - j + 1) * binomial(p - i + 1, p - k + 1) *
               binomial(p + i, p - j + 1) * binomial(p + i, p - k + 1);
      }
      Rational v(sum, 2 * binomial(p, j - 1) * binomial(p, k - 1));
      if ((j + k) % 2) v = -v;
      g(j - 1, k - 1) = ScalarTraits<T>::exact ? T(v) : T(to_double(v));
    }
  return g;
}

namespace detail {

template <Scalar T>
DenseMatrix<T> transform_matrix(int p, const T& a, const T& b, const char* who) {
  require_degree(p, who);
  if (!(a < b)) throw DomainError(std::string(who) + ": need a < b");
  const T ta = (a + T(1)) / T(2);
  const T tb = (b + T(1)) / T(2);
  DenseMatrix<T> m(p + 1, p + 1);
  for (int j = 0; j <= p; ++j)
    for (int k = 0; k <= p; ++k) {
      T s(0);
      for (int i = std::max(0, j + k - p); i <= std::min(j, k); ++i)
        s += bernstein_unit<T>(j, i, tb) * bernstein_unit<T>(p - j, k - i, ta);
      m(j, k) = s;
    }
  return m;
}

}  // namespace detail

/// Coefficients of a degree-p polynomial over [a,b] (in biunit coordinates)
/// from its coefficients over [-1,1]: c~ = A c.
template <Scalar T>
DenseMatrix<T> interval_transform(int p, const T& a, const T& b) {
  return detail::transform_matrix<T>(p, a, b, "interval_transform");
}

inline DenseMatrix<double> interval_transform(int p, double a, double b) {
  return interval_transform<double>(p, a, b);
}

/// Extension counterpart: (a,b) are the biunit endpoints mapped into the frame
/// of a sub-interval, so the bounds may lie outside [-1,1]. It inverts
/// interval_transform of that sub-interval.
template <Scalar T>
DenseMatrix<T> interval_transform_inverse(int p, const T& a, const T& b) {
  return detail::transform_matrix<T>(p, a, b, "interval_transform_inverse");
}

inline DenseMatrix<double> interval_transform_inverse(int p, double a, double b) {
  return interval_transform_inverse<double>(p, a, b);
}

/// E^{p,q}, with B^p = E B^q. Rows index degree p, columns degree q.
template <Scalar T = double>
DenseMatrix<T> elevation_matrix(int p, int q) {
  detail::require_degree(p, "elevation_matrix");
  if (q < p) throw DomainError("elevation_matrix: target degree below source degree");
  detail::require_degree(q, "elevation_matrix");
  auto e = DenseMatrix<T>::identity(p + 1);
  for (int r = p; r < q; ++r) {
    DenseMatrix<T> step(r + 1, r + 2);
    for (int i = 0; i <= r; ++i) {
      step(i, i) = T(r + 1 - i) / T(r + 1);
      step(i, i + 1) = T(i + 1) / T(r + 1);
    }
    e = e * step;
  }
  return e;
}

/// D^{p,q} for q <= p: chained right pseudoinverses of single-step elevations.
template <Scalar T = double>
DenseMatrix<T> reduction_matrix(int p, int q) {
  detail::require_degree(p, "reduction_matrix");
  if (q > p) throw DomainError("reduction_matrix: target degree above source degree");
  if (q < 0) throw DomainError("reduction_matrix: negative target degree");
  auto d = DenseMatrix<T>::identity(p + 1);
  for (int r = p; r > q; --r) {
    auto e = elevation_matrix<T>(r - 1, r);
    auto et = e.transpose();
    d = d * (et * inverse(DenseMatrix<T>(e * et)));
  }
  return d;
}

template <Scalar T>
T bernstein_integral(int p, const T& a, const T& b) {
  if (!(a < b)) throw DomainError("bernstein_integral: need a < b");
  return (b - a) / T(p + 1);
}

inline double bernstein_integral(int p, double a, double b) { return bernstein_integral<double>(p, a, b); }

}  // namespace bezproj

#endif  // BEZPROJ_BERNSTEIN_HPP
