#ifndef BEZPROJ_TMESH_HPP
#define BEZPROJ_TMESH_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bezproj/dense_matrix.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/knot_vector.hpp"
#include "bezproj/spline_space.hpp"
#include "bezproj/tensor.hpp"

namespace bezproj {

/// Axis-aligned segment in one-based index space.
struct Segment {
  int x1, y1, x2, y2;
  bool horizontal() const { return y1 == y2; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class AnchorKind { vertex, horizontal_edge, vertical_edge, cell };

inline std::string to_string(AnchorKind k) {
  switch (k) {
    case AnchorKind::vertex: return "vertex";
    case AnchorKind::horizontal_edge: return "horizontal-edge";
    case AnchorKind::vertical_edge: return "vertical-edge";
    case AnchorKind::cell: return "cell";
  }
  return "?";
}

struct Anchor {
  std::size_t index = 0;
  AnchorKind kind = AnchorKind::vertex;
  int xlo = 0, xhi = 0, ylo = 0, yhi = 0;  // index-space extent
};

/// Face and edge extension of one T-junction. Segments run along the
/// extension direction; `extent()` is their closed union.
struct Extension {
  int x = 0, y = 0;      // T-junction
  bool horizontal = true;
  Segment face;
  Segment edge;
  Segment extent() const {
    if (horizontal) {
      return {std::min({face.x1, face.x2, edge.x1, edge.x2}), y, std::max({face.x1, face.x2, edge.x1, edge.x2}), y};
    }
    return {x, std::min({face.y1, face.y2, edge.y1, edge.y2}), x, std::max({face.y1, face.y2, edge.y1, edge.y2})};
  }
};

struct Cell {
  int xlo, ylo, xhi, yhi;
};

template <Scalar T>
struct TElement {
  std::size_t index = 0;
  Cell cell{};
  std::array<T, 2> lo{}, hi{};
  std::vector<std::size_t> functions;  // anchor indices, ascending
};

/// Two-dimensional T-mesh over the index domain [1,m1] x [1,m2], m_i the
/// length of the global knot vector in direction i.
template <Scalar T>
class TMesh {
 public:
  TMesh(std::array<int, 2> degrees, std::array<KnotVector<T>, 2> knots, const std::vector<Segment>& edges,
        const std::optional<std::vector<std::array<int, 2>>>& vertices = std::nullopt)
      : p_(degrees), kv_(std::move(knots)) {
    for (int d = 0; d < 2; ++d)
      if (kv_[d].degree() != p_[d]) throw DomainError("tmesh: knot vector degree does not match mesh degree");
    m_ = {static_cast<int>(kv_[0].size()), static_cast<int>(kv_[1].size())};
    h_.assign(static_cast<std::size_t>((m_[0] + 1) * (m_[1] + 1)), false);
    v_ = h_;
    for (std::size_t k = 0; k < edges.size(); ++k) add_segment(edges[k], "edge " + std::to_string(k));
    validate();
    if (vertices) {
      for (const auto& [x, y] : *vertices) {
        if (!in_domain(x, y) || !is_vertex(x, y)) {
          throw MalformedMeshError("vertex (" + std::to_string(x) + "," + std::to_string(y) +
                                   ") is not a T-mesh vertex");
        }
      }
    }
  }

  int degree(int d) const { return p_.at(d); }
  const KnotVector<T>& knot_vector(int d) const { return kv_.at(d); }
  int extent(int d) const { return m_.at(d); }
  int num_functions(int d) const { return m_.at(d) - p_.at(d) - 1; }

  /// Unit edge (x,y)-(x+1,y) / (x,y)-(x,y+1).
  bool h_edge(int x, int y) const { return x >= 1 && x < m_[0] && y >= 1 && y <= m_[1] && h_[at(x, y)]; }
  bool v_edge(int x, int y) const { return x >= 1 && x <= m_[0] && y >= 1 && y < m_[1] && v_[at(x, y)]; }

  int valence(int x, int y) const {
    return h_edge(x - 1, y) + h_edge(x, y) + v_edge(x, y - 1) + v_edge(x, y);
  }
  bool is_corner(int x, int y) const { return (x == 1 || x == m_[0]) && (y == 1 || y == m_[1]); }
  bool is_vertex(int x, int y) const { return valence(x, y) >= 3 || is_corner(x, y); }
  bool on_boundary(int x, int y) const { return x == 1 || y == 1 || x == m_[0] || y == m_[1]; }

  std::vector<std::array<int, 2>> vertices() const {
    std::vector<std::array<int, 2>> out;
    for (int y = 1; y <= m_[1]; ++y)
      for (int x = 1; x <= m_[0]; ++x)
        if (is_vertex(x, y)) out.push_back({x, y});
    return out;
  }

  /// Maximal T-mesh edges (between consecutive vertices).
  std::vector<Segment> edges() const {
    std::vector<Segment> out;
    for (int y = 1; y <= m_[1]; ++y)
      for (int x = 1; x <= m_[0]; ++x) {
        if (!is_vertex(x, y)) continue;
        if (h_edge(x, y)) {
          int e = x + 1;
          while (!is_vertex(e, y)) ++e;
          out.push_back({x, y, e, y});
        }
        if (v_edge(x, y)) {
          int e = y + 1;
          while (!is_vertex(x, e)) ++e;
          out.push_back({x, y, x, e});
        }
      }
    return out;
  }

  const std::vector<Cell>& cells() const { return cells_; }

  std::vector<Anchor> anchors() const {
    std::vector<Anchor> out;
    auto in_range = [&](int d, int lo, int hi) {
      const int n = num_functions(d);
      if (p_[d] % 2 == 1) return lo >= (p_[d] + 1) / 2 + 1 && lo <= n + (p_[d] + 1) / 2;
      return lo >= p_[d] / 2 + 1 && hi <= n + p_[d] / 2 + 1;
    };
    const bool odd1 = p_[0] % 2 == 1, odd2 = p_[1] % 2 == 1;
    if (odd1 && odd2) {
      for (const auto& [x, y] : vertices())
        if (in_range(0, x, x) && in_range(1, y, y)) out.push_back({0, AnchorKind::vertex, x, x, y, y});
    } else if (!odd1 && !odd2) {
      for (const auto& c : cells_)
        if (in_range(0, c.xlo, c.xhi) && in_range(1, c.ylo, c.yhi))
          out.push_back({0, AnchorKind::cell, c.xlo, c.xhi, c.ylo, c.yhi});
    } else {
      for (const auto& s : edges()) {
        if (odd1 && !s.horizontal() && in_range(0, s.x1, s.x1) && in_range(1, s.y1, s.y2))
          out.push_back({0, AnchorKind::vertical_edge, s.x1, s.x1, s.y1, s.y2});
        if (odd2 && s.horizontal() && in_range(0, s.x1, s.x2) && in_range(1, s.y1, s.y1))
          out.push_back({0, AnchorKind::horizontal_edge, s.x1, s.x2, s.y1, s.y1});
      }
    }
    std::sort(out.begin(), out.end(), [](const Anchor& a, const Anchor& b) {
      return std::tie(a.ylo, a.xlo, a.yhi, a.xhi) < std::tie(b.ylo, b.xlo, b.yhi, b.xhi);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
    return out;
  }

  /// Index-space local knot vector of an anchor in direction d.
  std::vector<int> local_knot_indices(const Anchor& a, int d) const {
    const int lo = d == 0 ? a.xlo : a.ylo;
    const int hi = d == 0 ? a.xhi : a.yhi;
    const int blo = d == 0 ? a.ylo : a.xlo;
    const int bhi = d == 0 ? a.yhi : a.xhi;
    const int p = p_[d];
    const int need = (p + 2) / 2;
    std::vector<int> left, right;
    int start_left = lo, start_right = hi;
    if (p % 2 == 1) {
      if (lo != hi) throw DomainError("anchor does not match degree parity");
      start_left = lo - 1;
      start_right = hi + 1;
    } else if (lo == hi) {
      throw DomainError("anchor does not match degree parity");
    }
    for (int c = start_right; c <= m_[d] && static_cast<int>(right.size()) < need; ++c)
      if (spans(d, c, blo, bhi)) right.push_back(c);
    for (int c = start_left; c >= 1 && static_cast<int>(left.size()) < need; --c)
      if (spans(d, c, blo, bhi)) left.push_back(c);
    if (static_cast<int>(left.size()) < need || static_cast<int>(right.size()) < need) {
      throw MalformedMeshError("anchor " + std::to_string(a.index) + ": too few knot lines in direction " +
                               std::to_string(d + 1));
    }
    std::vector<int> out(left.rbegin(), left.rend());
    if (p % 2 == 1) out.push_back(lo);
    out.insert(out.end(), right.begin(), right.end());
    return out;
  }

  std::vector<T> local_knot_vector(const Anchor& a, int d) const {
    std::vector<T> g;
    for (int i : local_knot_indices(a, d)) g.push_back(kv_[d][static_cast<std::size_t>(i - 1)]);
    return g;
  }

  std::pair<std::vector<T>, std::vector<T>> local_knot_vectors(const Anchor& a) const {
    return {local_knot_vector(a, 0), local_knot_vector(a, 1)};
  }

  std::vector<Extension> extensions() const {
    std::vector<Extension> out;
    for (int y = 2; y < m_[1]; ++y)
      for (int x = 2; x < m_[0]; ++x) {
        if (valence(x, y) != 3) continue;
        Extension e;
        e.x = x;
        e.y = y;
        const int face_n = (p_[0] + 1) / 2, edge_n = p_[0] / 2;  // floor((p+1)/2), ceil((p-1)/2)
        const int face_m = (p_[1] + 1) / 2, edge_m = p_[1] / 2;
        if (!h_edge(x - 1, y)) {
          e.horizontal = true;
          e.face = {walk(0, x, y, -1, face_n), y, x, y};
          e.edge = {x, y, walk(0, x, y, +1, edge_n), y};
        } else if (!h_edge(x, y)) {
          e.horizontal = true;
          e.face = {x, y, walk(0, x, y, +1, face_n), y};
          e.edge = {walk(0, x, y, -1, edge_n), y, x, y};
        } else if (!v_edge(x, y - 1)) {
          e.horizontal = false;
          e.face = {x, walk(1, x, y, -1, face_m), x, y};
          e.edge = {x, y, x, walk(1, x, y, +1, edge_m)};
        } else {
          e.horizontal = false;
          e.face = {x, y, x, walk(1, x, y, +1, face_m)};
          e.edge = {x, walk(1, x, y, -1, edge_m), x, y};
        }
        out.push_back(e);
      }
    return out;
  }

  /// No horizontal extension meets a vertical one (closed segments).
  bool is_analysis_suitable() const {
    const auto ext = extensions();
    for (const auto& a : ext) {
      if (!a.horizontal) continue;
      const auto h = a.extent();
      for (const auto& b : ext) {
        if (b.horizontal) continue;
        const auto v = b.extent();
        if (h.x1 <= v.x1 && v.x1 <= h.x2 && v.y1 <= h.y1 && h.y1 <= v.y2) return false;
      }
    }
    return true;
  }

  /// Mesh with all face extensions added.
  TMesh extended() const {
    TMesh out = *this;
    for (const auto& e : extensions()) out.add_segment(normalized(e.face), "face extension");
    out.validate();
    return out;
  }

  /// Nonzero-area cells of the extended mesh with their overlapping functions.
  std::vector<TElement<T>> bezier_mesh() const {
    if (!is_analysis_suitable()) throw DomainError("bezier_mesh: mesh is not analysis-suitable");
    const auto ext = extended();
    const auto anc = anchors();
    std::vector<std::pair<std::vector<T>, std::vector<T>>> lkv;
    for (const auto& a : anc) lkv.push_back(local_knot_vectors(a));
    std::vector<TElement<T>> out;
    for (const auto& c : ext.cells()) {
      TElement<T> el;
      el.cell = c;
      el.lo = {kv_[0][c.xlo - 1], kv_[1][c.ylo - 1]};
      el.hi = {kv_[0][c.xhi - 1], kv_[1][c.yhi - 1]};
      if (!(el.lo[0] < el.hi[0]) || !(el.lo[1] < el.hi[1])) continue;
      for (std::size_t a = 0; a < anc.size(); ++a) {
        const auto& [g1, g2] = lkv[a];
        if (g1.front() < el.hi[0] && el.lo[0] < g1.back() && g2.front() < el.hi[1] && el.lo[1] < g2.back())
          el.functions.push_back(a);
      }
      out.push_back(std::move(el));
    }
    std::sort(out.begin(), out.end(), [](const TElement<T>& a, const TElement<T>& b) {
      return std::tie(a.lo[1], a.lo[0]) < std::tie(b.lo[1], b.lo[0]);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
    return out;
  }

  /// Rows are Bernstein coefficients (direction 1 fastest) of each function
  /// overlapping the element.
  ElementOperators<T> element_extraction(const TElement<T>& el) const {
    const auto anc = anchors();
    const std::size_t nb = static_cast<std::size_t>((p_[0] + 1) * (p_[1] + 1));
    if (el.functions.size() != nb) {
      throw MalformedMeshError("element " + std::to_string(el.index) + " has " + std::to_string(el.functions.size()) +
                               " overlapping functions, expected " + std::to_string(nb));
    }
    ElementOperators<T> ops;
    ops.C = DenseMatrix<T>(nb, nb);
    for (std::size_t r = 0; r < nb; ++r) {
      const auto [g1, g2] = local_knot_vectors(anc.at(el.functions[r]));
      const auto row = reversed_kron(std::vector<std::vector<T>>{bspline_bernstein_coefficients(g1, el.lo[0], el.hi[0]),
                                                               bspline_bernstein_coefficients(g2, el.lo[1], el.hi[1])});
      for (std::size_t j = 0; j < nb; ++j) ops.C(r, j) = row[j];
    }
    try {
      ops.R = inverse(ops.C);
    } catch (const InternalError& e) {
      throw MalformedMeshError("element " + std::to_string(el.index) +
                               ": singular extraction operator (mesh not analysis-suitable or malformed): " + e.what());
    }
    return ops;
  }

  /// Value of anchor function a at parametric (s1,s2).
  T function_value(const Anchor& a, const T& s1, const T& s2) const {
    const auto [g1, g2] = local_knot_vectors(a);
    return local_bspline_value(g1, s1, kv_[0].back()) * local_bspline_value(g2, s2, kv_[1].back());
  }

  /// Every vertex and edge of this mesh appears in `other`.
  bool is_nested_in(const TMesh& other) const {
    if (p_ != other.p_ || !(kv_[0] == other.kv_[0]) || !(kv_[1] == other.kv_[1])) {
      throw DomainError("is_nested: meshes have different degrees or knot vectors");
    }
    for (std::size_t i = 0; i < h_.size(); ++i)
      if ((h_[i] && !other.h_[i]) || (v_[i] && !other.v_[i])) return false;
    return true;
  }

  /// T-mesh of a tensor-product space: all index lines present.
  static TMesh tensor(const SplineSpace<T>& space) {
    if (space.dim() != 2) throw DomainError("tmesh: tensor mesh needs a bivariate space");
    const int m1 = static_cast<int>(space.direction(0).size());
    const int m2 = static_cast<int>(space.direction(1).size());
    std::vector<Segment> e;
    for (int x = 1; x <= m1; ++x) e.push_back({x, 1, x, m2});
    for (int y = 1; y <= m2; ++y) e.push_back({1, y, m1, y});
    return TMesh({space.degree(0), space.degree(1)}, {space.direction(0), space.direction(1)}, e);
  }

  /// Unit edges as maximal straight runs (for writing).
  std::vector<Segment> segments() const {
    std::vector<Segment> out;
    for (int y = 1; y <= m_[1]; ++y)
      for (int x = 1; x < m_[0]; ++x)
        if (h_edge(x, y) && !h_edge(x - 1, y)) {
          int e = x;
          while (h_edge(e, y)) ++e;
          out.push_back({x, y, e, y});
        }
    for (int x = 1; x <= m_[0]; ++x)
      for (int y = 1; y < m_[1]; ++y)
        if (v_edge(x, y) && !v_edge(x, y - 1)) {
          int e = y;
          while (v_edge(x, e)) ++e;
          out.push_back({x, y, x, e});
        }
    return out;
  }

 private:
  std::size_t at(int x, int y) const { return static_cast<std::size_t>(y * (m_[0] + 1) + x); }
  bool in_domain(int x, int y) const { return x >= 1 && y >= 1 && x <= m_[0] && y <= m_[1]; }

  static Segment normalized(Segment s) {
    if (s.x1 > s.x2) std::swap(s.x1, s.x2);
    if (s.y1 > s.y2) std::swap(s.y1, s.y2);
    return s;
  }

  void add_segment(Segment s, const std::string& what) {
    s = normalized(s);
    if (!in_domain(s.x1, s.y1) || !in_domain(s.x2, s.y2)) throw MalformedMeshError(what + " leaves the index domain");
    if (s.x1 != s.x2 && s.y1 != s.y2) throw MalformedMeshError(what + " is not axis-aligned");
    for (int x = s.x1; x < s.x2; ++x) h_[at(x, s.y1)] = true;
    for (int y = s.y1; y < s.y2; ++y) v_[at(s.x1, y)] = true;
  }

  /// Perpendicular lines at index c that cover the band [blo,bhi] (or the point).
  bool spans(int d, int c, int blo, int bhi) const {
    if (blo == bhi) return d == 0 ? (v_edge(c, blo - 1) || v_edge(c, blo)) : (h_edge(blo - 1, c) || h_edge(blo, c));
    for (int t = blo; t < bhi; ++t)
      if (d == 0 ? !v_edge(c, t) : !h_edge(t, c)) return false;
    return true;
  }

  /// Walks from (x,y) along direction d until `count` perpendicular lines are crossed.
  int walk(int d, int x, int y, int step, int count) const {
    int c = d == 0 ? x : y;
    const int lim = step > 0 ? m_[d] : 1;
    int crossed = 0;
    while (crossed < count && c != lim) {
      c += step;
      if (d == 0 ? spans(0, c, y, y) : spans(1, c, x, x)) ++crossed;
    }
    return c;
  }

  void validate() {
    for (int x = 1; x < m_[0]; ++x)
      if (!h_edge(x, 1) || !h_edge(x, m_[1])) throw MalformedMeshError("domain boundary is not closed (horizontal side)");
    for (int y = 1; y < m_[1]; ++y)
      if (!v_edge(1, y) || !v_edge(m_[0], y)) throw MalformedMeshError("domain boundary is not closed (vertical side)");
    for (int y = 1; y <= m_[1]; ++y)
      for (int x = 1; x <= m_[0]; ++x) {
        const int k = valence(x, y);
        const std::string where = "grid point (" + std::to_string(x) + "," + std::to_string(y) + ")";
        if (k == 1) throw MalformedMeshError(where + " has a dangling edge");
        if (k == 2 && !is_corner(x, y)) {
          const bool straight = (h_edge(x - 1, y) && h_edge(x, y)) || (v_edge(x, y - 1) && v_edge(x, y));
          if (!straight) throw MalformedMeshError(where + " has an L-shaped corner inside the domain");
        }
      }
    // cells by flood fill over unit squares
    const int w = m_[0] - 1, h = m_[1] - 1;
    std::vector<int> label(static_cast<std::size_t>(w * h), -1);
    cells_.clear();
    for (int sy = 1; sy <= h; ++sy)
      for (int sx = 1; sx <= w; ++sx) {
        if (label[(sy - 1) * w + (sx - 1)] >= 0) continue;
        const int id = static_cast<int>(cells_.size());
        Cell c{sx, sy, sx + 1, sy + 1};
        int count = 0;
        std::vector<std::pair<int, int>> stack{{sx, sy}};
        label[(sy - 1) * w + (sx - 1)] = id;
        while (!stack.empty()) {
          auto [x, y] = stack.back();
          stack.pop_back();
          ++count;
          c.xlo = std::min(c.xlo, x);
          c.ylo = std::min(c.ylo, y);
          c.xhi = std::max(c.xhi, x + 1);
          c.yhi = std::max(c.yhi, y + 1);
          auto visit = [&](int nx, int ny, bool open) {
            if (!open || nx < 1 || ny < 1 || nx > w || ny > h) return;
            auto& l = label[(ny - 1) * w + (nx - 1)];
            if (l < 0) {
              l = id;
              stack.push_back({nx, ny});
            }
          };
          visit(x - 1, y, !v_edge(x, y));
          visit(x + 1, y, !v_edge(x + 1, y));
          visit(x, y - 1, !h_edge(x, y));
          visit(x, y + 1, !h_edge(x, y + 1));
        }
        if (count != (c.xhi - c.xlo) * (c.yhi - c.ylo)) {
          throw MalformedMeshError("cell containing square (" + std::to_string(sx) + "," + std::to_string(sy) +
                                   ") is not a rectangle");
        }
        cells_.push_back(c);
      }
  }

  std::array<int, 2> p_;
  std::array<KnotVector<T>, 2> kv_;
  std::array<int, 2> m_{};
  std::vector<bool> h_, v_;
  std::vector<Cell> cells_;
};

}  // namespace bezproj

#endif  // BEZPROJ_TMESH_HPP
