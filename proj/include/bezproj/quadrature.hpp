#ifndef BEZPROJ_QUADRATURE_HPP
#define BEZPROJ_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "bezproj/errors.hpp"

namespace bezproj {

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule on [-1,1].
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one point");
  QuadratureRule q;
  q.points.resize(n);
  q.weights.resize(n);
  const unsigned un = static_cast<unsigned>(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = std::legendre(un, x);
      const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double pn = std::legendre(un, x);
    const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.points[i] = -x;
    q.points[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.points[n / 2] = 0.0;
  return q;
}

/// Tensor rule: points[k] is a d-tuple, direction 0 fastest.
struct TensorQuadrature {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

inline TensorQuadrature tensor_gauss(const std::vector<int>& orders) {
  TensorQuadrature t;
  t.points.push_back({});
  t.weights.push_back(1.0);
  for (int n : orders) {
    auto q = gauss_legendre(n);
    TensorQuadrature next;
    for (std::size_t j = 0; j < q.size(); ++j)
      for (std::size_t k = 0; k < t.points.size(); ++k) {
        auto p = t.points[k];
        p.push_back(q.points[j]);
        next.points.push_back(std::move(p));
        next.weights.push_back(t.weights[k] * q.weights[j]);
      }
    t = std::move(next);
  }
  return t;
}

}  // namespace bezproj

#endif  // BEZPROJ_QUADRATURE_HPP
