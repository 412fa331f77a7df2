#ifndef BEZPROJ_DENSE_MATRIX_HPP
#define BEZPROJ_DENSE_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bezproj/errors.hpp"
#include "bezproj/scalar.hpp"

namespace bezproj {

/// Small row-major dense matrix. Element operators here are at most a few
/// hundred entries, so no expression templates or blocking.
///
/// Storage and the call operator are zero-based; functions that take basis
/// indices in their mathematical (one-based) form say so explicitly.
template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DomainError("DenseMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, const T& s) { return a *= s; }
  friend DenseMatrix operator*(const T& s, DenseMatrix a) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DomainError("DenseMatrix: cannot multiply " + a.shape() + " by " + b.shape());
    }
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  /// Converts entry-wise, e.g. exact operators to doubles.
  template <Scalar U>
  DenseMatrix<U> cast() const {
    DenseMatrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<U, double>) {
          out(i, j) = to_double((*this)(i, j));
        } else {
          out(i, j) = U((*this)(i, j));
        }
      }
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  void require_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DomainError("DenseMatrix: shape mismatch " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
double max_abs_diff(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DomainError("max_abs_diff: shape mismatch " + a.shape() + " vs " + b.shape());
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::fabs(to_double(T(a(i, j) - b(i, j)))));
  return m;
}

template <Scalar T>
double max_abs(const DenseMatrix<T>& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::fabs(to_double(v)));
  return m;
}

/// Infinity-norm.
template <Scalar T>
double norm_inf(const DenseMatrix<T>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(to_double(a(i, j)));
    m = std::max(m, s);
  }
  return m;
}

namespace detail {

template <Scalar T>
bool is_pivot_zero(const T& v, double scale) {
  if constexpr (ScalarTraits<T>::exact) {
    (void)scale;
    return v == T(0);
  } else {
    return std::fabs(v) <= 1e-14 * scale;
  }
}

}  // namespace detail

/// Solves A X = B by Gaussian elimination with partial pivoting. Exact for
/// rational scalars. Throws InternalError on a (numerically) singular A,
/// carrying a crude condition estimate.
template <Scalar T>
DenseMatrix<T> solve(DenseMatrix<T> a, DenseMatrix<T> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw DomainError("solve: incompatible shapes " + a.shape() + " and " + b.shape());
  }
  const double scale = std::max(norm_inf(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(to_double(a(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(to_double(a(i, k)));
      if (v > best || (ScalarTraits<T>::exact && best == 0.0 && a(i, k) != T(0))) {
        best = v;
        piv = i;
      }
    }
    if (detail::is_pivot_zero(a(piv, k), scale)) {
      const double cond = best > 0.0 ? scale / best : std::numeric_limits<double>::infinity();
      throw InternalError("solve: matrix is numerically singular (condition estimate " +
                              std::to_string(cond) + ")",
                          cond);
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    const T pivot = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == T(0)) continue;
      const T f = a(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T s = b(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) s -= a(kk, c) * b(c, j);
      b(kk, j) = s / a(kk, kk);
    }
  }
  return b;
}

template <Scalar T>
DenseMatrix<T> inverse(const DenseMatrix<T>& a) {
  return solve(a, DenseMatrix<T>::identity(a.rows()));
}

/// Applies A to a column vector.
template <Scalar T>
std::vector<T> apply(const DenseMatrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw DomainError("apply: size mismatch");
  std::vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <Scalar T>
std::ostream& operator<<(std::ostream& os, const DenseMatrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      if constexpr (ScalarTraits<T>::exact) {
        os << to_string(m(i, j));
      } else {
        os << m(i, j);
      }
    }
    os << (i + 1 == m.rows() ? "]]" : "]\n");
  }
  return os;
}

}  // namespace bezproj

#endif  // BEZPROJ_DENSE_MATRIX_HPP
