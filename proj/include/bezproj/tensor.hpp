#ifndef BEZPROJ_TENSOR_HPP
#define BEZPROJ_TENSOR_HPP

#include <string>
#include <vector>

#include "bezproj/dense_matrix.hpp"
#include "bezproj/errors.hpp"

namespace bezproj {

template <Scalar T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T& aij = a(i, j);
      if (aij == T(0)) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

/// factors[N-1] (x) ... (x) factors[0]; direction 0 varies fastest.
template <Scalar T>
DenseMatrix<T> reversed_kron(const std::vector<DenseMatrix<T>>& factors) {
  if (factors.empty()) throw DomainError("reversed_kron: empty factor list");
  DenseMatrix<T> out = factors.front();
  for (std::size_t d = 1; d < factors.size(); ++d) out = kron(factors[d], out);
  return out;
}

/// Kronecker product of vectors in the same order as reversed_kron.
template <Scalar T>
std::vector<T> reversed_kron(const std::vector<std::vector<T>>& factors) {
  if (factors.empty()) throw DomainError("reversed_kron: empty factor list");
  std::vector<T> out = factors.front();
  for (std::size_t d = 1; d < factors.size(); ++d) {
    std::vector<T> next;
    next.reserve(out.size() * factors[d].size());
    for (const T& v : factors[d])
      for (const T& u : out) next.push_back(v * u);
    out = std::move(next);
  }
  return out;
}

/// One-based a(i,j) = (p1+1)(j-1) + i.
inline int multi_index_2d(int i, int j, int p1, int p2 = -1) {
  if (i < 1 || i > p1 + 1 || j < 1 || (p2 >= 0 && j > p2 + 1)) {
    throw DomainError("multi_index_2d: index out of range");
  }
  return (p1 + 1) * (j - 1) + i;
}

/// One-based a(i,j,k) = (p1+1)(p2+1)(k-1) + (p1+1)(j-1) + i.
inline int multi_index_3d(int i, int j, int k, int p1, int p2, int p3 = -1) {
  if (i < 1 || i > p1 + 1 || j < 1 || j > p2 + 1 || k < 1 || (p3 >= 0 && k > p3 + 1)) {
    throw DomainError("multi_index_3d: index out of range");
  }
  return (p1 + 1) * (p2 + 1) * (k - 1) + (p1 + 1) * (j - 1) + i;
}

/// Zero-based multi-index from a linear index, direction 0 fastest.
inline std::vector<std::size_t> unflatten(std::size_t index, const std::vector<std::size_t>& extents) {
  std::vector<std::size_t> out(extents.size());
  for (std::size_t d = 0; d < extents.size(); ++d) {
    out[d] = index % extents[d];
    index /= extents[d];
  }
  return out;
}

inline std::size_t flatten(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& extents) {
  std::size_t out = 0;
  for (std::size_t d = extents.size(); d-- > 0;) out = out * extents[d] + idx[d];
  return out;
}

}  // namespace bezproj

#endif  // BEZPROJ_TENSOR_HPP
