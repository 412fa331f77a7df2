#ifndef BEZPROJ_SPLINE_OPS_HPP
#define BEZPROJ_SPLINE_OPS_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "bezproj/bernstein.hpp"
#include "bezproj/dense_matrix.hpp"
#include "bezproj/errors.hpp"
#include "bezproj/projection.hpp"
#include "bezproj/spline_space.hpp"
#include "bezproj/tensor.hpp"

namespace bezproj {

namespace detail {

/// Biunit coordinate of x in [a,b].
template <Scalar T>
T to_local(const T& x, const T& a, const T& b) {
  return (T(2) * x - a - b) / (b - a);
}

template <Scalar T>
bool same_knot(const T& a, const T& b) {
  return nearly_equal(a, b);
}

}  // namespace detail

/// Bernstein-level map from a source span [a,b] of degree ps to a target span
/// [c,d] of degree pt, restricted to the overlap [lo,hi]. Exact when the
/// overlap is the whole target and pt >= ps; otherwise the L2-best fit on the
/// target of the overlap piece.
template <Scalar T>
DenseMatrix<T> transfer_matrix_1d(int ps, const T& a, const T& b, int pt, const T& c, const T& d, const T& lo,
                                  const T& hi) {
  auto within = [](const T& x, const T& l, const T& r) {
    return (l < x || detail::same_knot(x, l)) && (x < r || detail::same_knot(x, r));
  };
  if (!(lo < hi) || !within(lo, a, b) || !within(hi, a, b) || !within(lo, c, d) || !within(hi, c, d)) {
    throw DomainError("transfer_matrix_1d: overlap must lie in both spans");
  }
  auto m = DenseMatrix<T>::identity(ps + 1);
  const bool full_source = detail::same_knot(lo, a) && detail::same_knot(hi, b);
  if (!full_source) m = interval_transform<T>(ps, detail::to_local(lo, a, b), detail::to_local(hi, a, b));
  const bool full_target = detail::same_knot(lo, c) && detail::same_knot(hi, d);
  if (!full_target) {
    const auto restrict = interval_transform<T>(ps, detail::to_local(lo, c, d), detail::to_local(hi, c, d));
    const T phi = (hi - lo) / (d - c);
    m = (phi * (gramian_inverse<T>(ps) * (restrict.transpose() * gramian<T>(ps)))) * m;
  }
  if (pt > ps) m = elevation_matrix<T>(ps, pt).transpose() * m;
  if (pt < ps) m = reduction_matrix<T>(ps, pt).transpose() * m;
  return m;
}

/// Source overlap of one target span in one direction.
template <Scalar T>
struct Overlap {
  std::size_t source = 0;  // source element index in this direction
  T lo, hi;
  T phi;  // |overlap| / |target span|
};

/// Target-to-source element map, per direction.
template <Scalar T>
struct SpaceMap {
  SplineSpace<T> source;
  SplineSpace<T> target;
  std::vector<std::vector<std::vector<Overlap<T>>>> overlaps;  // [dir][target element in dir]

  /// Source elements (global index) feeding target element e.
  std::vector<std::size_t> sources_of(std::size_t e) const {
    const auto idx = unflatten(e, target.element_extents());
    std::vector<std::size_t> ext;
    for (std::size_t d = 0; d < idx.size(); ++d) ext.push_back(overlaps[d][idx[d]].size());
    std::size_t total = 1;
    for (auto x : ext) total *= x;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < total; ++k) {
      const auto off = unflatten(k, ext);
      std::vector<std::size_t> s(idx.size());
      for (std::size_t d = 0; d < idx.size(); ++d) s[d] = overlaps[d][idx[d]][off[d]].source;
      out.push_back(flatten(s, source.element_extents()));
    }
    return out;
  }
};

template <Scalar T>
SpaceMap<T> build_space_map(const SplineSpace<T>& source, const SplineSpace<T>& target) {
  if (source.dim() != target.dim()) throw DomainError("space map: parametric dimensions differ");
  SpaceMap<T> map{source, target, {}};
  for (std::size_t d = 0; d < source.dim(); ++d) {
    const auto& ks = source.direction(d);
    const auto& kt = target.direction(d);
    if (!detail::same_knot(ks.front(), kt.front()) || !detail::same_knot(ks.back(), kt.back())) {
      throw DomainError("space map: parametric domains differ in direction " + std::to_string(d));
    }
    std::vector<std::vector<Overlap<T>>> per;
    for (std::size_t et = 0; et < kt.num_elements(); ++et) {
      auto [c, dd] = kt.element_bounds(et);
      std::vector<Overlap<T>> list;
      T covered(0);
      for (std::size_t es = 0; es < ks.num_elements(); ++es) {
        auto [a, b] = ks.element_bounds(es);
        const T lo = std::max(a, c);
        const T hi = std::min(b, dd);
        if (!(lo < hi) || detail::same_knot(lo, hi)) continue;
        list.push_back({es, lo, hi, (hi - lo) / (dd - c)});
        covered += list.back().phi;
      }
      if (!nearly_equal(covered, T(1))) throw InternalError("space map: overlaps do not tile target element");
      per.push_back(std::move(list));
    }
    map.overlaps.push_back(std::move(per));
  }
  return map;
}

/// True when every function of `a` lies in span(b).
template <Scalar T>
bool is_subspace(const SplineSpace<T>& a, const SplineSpace<T>& b) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    const auto& ka = a.direction(d);
    const auto& kb = b.direction(d);
    if (kb.degree() < ka.degree()) return false;
    if (!detail::same_knot(ka.front(), kb.front()) || !detail::same_knot(ka.back(), kb.back())) return false;
    const int dp = kb.degree() - ka.degree();
    for (const auto& [value, mult] : ka.breakpoints()) {
      if (detail::same_knot(value, ka.front()) || detail::same_knot(value, ka.back())) continue;
      if (kb.multiplicity(value) < mult + dp) return false;
    }
  }
  return true;
}

/// Per-element Bernstein coefficients (local size x components).
template <Scalar T>
struct BrokenField {
  SplineSpace<T> space;
  std::vector<DenseMatrix<T>> q;
};

/// Q^e = (C^e)^T P^e on every element.
template <Scalar T>
BrokenField<T> to_bernstein(const SplineSpace<T>& space, const DenseMatrix<T>& coeffs) {
  if (coeffs.rows() != space.num_functions()) throw DomainError("to_bernstein: coefficient count mismatch");
  BrokenField<T> f{space, {}};
  for (std::size_t e = 0; e < space.num_elements(); ++e) {
    const auto el = space.element(e);
    DenseMatrix<T> p(el.functions.size(), coeffs.cols());
    for (std::size_t l = 0; l < el.functions.size(); ++l)
      for (std::size_t c = 0; c < coeffs.cols(); ++c) p(l, c) = coeffs(el.functions[l], c);
    f.q.push_back(space.extraction_operator(e).C.transpose() * p);
  }
  return f;
}

/// Moves a broken field onto the target's elements and degrees.
template <Scalar T>
BrokenField<T> transfer(const BrokenField<T>& field, const SplineSpace<T>& target) {
  const auto map = build_space_map(field.space, target);
  const auto& src = field.space;
  const std::size_t comps = field.q.empty() ? 0 : field.q.front().cols();
  BrokenField<T> out{target, {}};
  for (std::size_t e = 0; e < target.num_elements(); ++e) {
    const auto idx = unflatten(e, target.element_extents());
    std::vector<std::vector<DenseMatrix<T>>> mats(target.dim());
    std::vector<std::size_t> ext;
    for (std::size_t d = 0; d < target.dim(); ++d) {
      auto [c, dd] = target.direction(d).element_bounds(idx[d]);
      for (const auto& ov : map.overlaps[d][idx[d]]) {
        auto [a, b] = src.direction(d).element_bounds(ov.source);
        mats[d].push_back(transfer_matrix_1d<T>(src.degree(d), a, b, target.degree(d), c, dd, ov.lo, ov.hi));
      }
      ext.push_back(mats[d].size());
    }
    std::size_t total = 1;
    for (auto x : ext) total *= x;
    DenseMatrix<T> q(target.local_size(), comps);
    for (std::size_t k = 0; k < total; ++k) {
      const auto off = unflatten(k, ext);
      std::vector<DenseMatrix<T>> f;
      std::vector<std::size_t> s(target.dim());
      for (std::size_t d = 0; d < target.dim(); ++d) {
        f.push_back(mats[d][off[d]]);
        s[d] = map.overlaps[d][idx[d]][off[d]].source;
      }
      q += reversed_kron(f) * field.q[flatten(s, src.element_extents())];
    }
    out.q.push_back(std::move(q));
  }
  return out;
}

/// lambda^e = (R^e)^T Q^e, then either the first element's value (exact
/// transfers, all elements agree) or the weighted average.
template <Scalar T>
DenseMatrix<T> to_spline(const BrokenField<T>& field, bool smooth, WeightMode mode = WeightMode::approximate) {
  const auto& space = field.space;
  const std::size_t comps = field.q.empty() ? 0 : field.q.front().cols();
  DenseMatrix<T> out(space.num_functions(), comps);
  std::vector<bool> seen(space.num_functions(), false);
  std::vector<std::vector<T>> omega;
  if (smooth) omega = smoothing_weights(space, mode == WeightMode::exact ? WeightMode::parametric : mode);
  for (std::size_t e = 0; e < space.num_elements(); ++e) {
    const auto el = space.element(e);
    const auto lambda = space.extraction_operator(e).R.transpose() * field.q[e];
    for (std::size_t l = 0; l < el.functions.size(); ++l) {
      const std::size_t a = el.functions[l];
      if (smooth) {
        for (std::size_t c = 0; c < comps; ++c) out(a, c) += omega[e][l] * lambda(l, c);
      } else if (!seen[a]) {
        for (std::size_t c = 0; c < comps; ++c) out(a, c) = lambda(l, c);
        seen[a] = true;
      }
    }
  }
  return out;
}

/// Chain of spaces with the primitive steps between them.
template <Scalar T>
struct OpPlan {
  std::vector<SplineSpace<T>> spaces;  // source first, final target last
  std::vector<std::string> steps;
  bool smoothing = false;

  const SplineSpace<T>& source() const { return spaces.front(); }
  const SplineSpace<T>& target() const { return spaces.back(); }
  bool exact() const { return !smoothing; }
};

template <Scalar T>
OpPlan<T> make_plan(const SplineSpace<T>& source, const SplineSpace<T>& target) {
  OpPlan<T> plan;
  plan.spaces = {source, target};
  plan.smoothing = !is_subspace(source, target);
  plan.steps = {"extract", "transfer", "reconstruct"};
  if (plan.smoothing) plan.steps.push_back("smooth");
  return plan;
}

/// Fuses consecutive plans: one extraction, all transfers at the Bernstein
/// level, one reconstruction, and a single smoothing step when any piece is inexact.
template <Scalar T>
OpPlan<T> compose(const std::vector<OpPlan<T>>& plans) {
  if (plans.empty()) throw DomainError("compose: empty plan list");
  if (plans.size() == 1) return plans.front();
  OpPlan<T> out;
  out.spaces.push_back(plans.front().source());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (i > 0 && !(plans[i].source() == plans[i - 1].target())) {
      throw DomainError("compose: plan " + std::to_string(i) + " does not start where plan " +
                        std::to_string(i - 1) + " ends");
    }
    out.spaces.insert(out.spaces.end(), plans[i].spaces.begin() + 1, plans[i].spaces.end());
    out.smoothing = out.smoothing || plans[i].smoothing;
  }
  out.steps.push_back("extract");
  for (std::size_t i = 1; i < out.spaces.size(); ++i) out.steps.push_back("transfer");
  out.steps.push_back("reconstruct");
  if (out.smoothing) out.steps.push_back("smooth");
  return out;
}

template <Scalar T>
struct OpResult {
  SplineSpace<T> space;
  ControlNet<T> net;
  bool exact = true;
  OpPlan<T> plan;
};

/// Runs a plan on a control net; rational nets travel in homogeneous form.
template <Scalar T>
OpResult<T> execute(const OpPlan<T>& plan, const ControlNet<T>& net, WeightMode mode = WeightMode::approximate) {
  net.validate(plan.source().num_functions());
  const DenseMatrix<T> coeffs = net.rational() ? net.homogeneous() : net.points;
  auto field = to_bernstein(plan.source(), coeffs);
  for (std::size_t i = 1; i < plan.spaces.size(); ++i) field = transfer(field, plan.spaces[i]);
  const auto out = to_spline(field, plan.smoothing, mode);
  OpResult<T> r{plan.target(), {}, plan.exact(), plan};
  if (net.rational()) {
    r.net = ControlNet<T>::from_homogeneous(out, true);
  } else {
    r.net.points = out;
  }
  return r;
}

/// Generic Bezier projection of a spline from `source` onto `target`.
template <Scalar T>
OpResult<T> project_generic(const SplineSpace<T>& source, const SplineSpace<T>& target, const ControlNet<T>& net,
                            WeightMode mode = WeightMode::approximate) {
  if (source == target) {
    net.validate(source.num_functions());
    return {target, net, true, make_plan(source, target)};
  }
  return execute(make_plan(source, target), net, mode);
}

// ---- element-level algorithms (univariate) ----

/// P^{e_i} = (R^{e_i})^T A_i (C^{e})^T P^{e} for sub-elements of a large element.
template <Scalar T>
std::vector<DenseMatrix<T>> large_to_small(int p, const std::pair<T, T>& source, const DenseMatrix<T>& C_source,
                                           const DenseMatrix<T>& P_source,
                                           const std::vector<std::pair<T, T>>& targets,
                                           const std::vector<DenseMatrix<T>>& R_targets) {
  if (targets.size() != R_targets.size()) throw DomainError("large_to_small: one R per target required");
  const auto q = C_source.transpose() * P_source;
  std::vector<DenseMatrix<T>> out;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& [lo, hi] = targets[i];
    const bool inside = (source.first < lo || detail::same_knot(source.first, lo)) &&
                        (hi < source.second || detail::same_knot(hi, source.second)) && lo < hi;
    if (!inside) throw DomainError("large_to_small: target element not contained in source element");
    const auto a = interval_transform<T>(p, detail::to_local(lo, source.first, source.second),
                                         detail::to_local(hi, source.first, source.second));
    out.push_back(R_targets[i].transpose() * (a * q));
  }
  return out;
}

/// Bernstein coefficients of one piece of a piecewise polynomial.
template <Scalar T>
struct BernsteinPiece {
  T lo, hi;
  DenseMatrix<T> q;
};

/// L2-best Bernstein coefficients on [c,d] of the pieces tiling it:
/// sum_i phi_i G^{-1} A_i^T G Q_i, A_i the restriction of [c,d] onto piece i.
template <Scalar T>
DenseMatrix<T> multi_to_one_bernstein(int p, const std::vector<BernsteinPiece<T>>& pieces, const std::pair<T, T>& target) {
  const auto& [c, d] = target;
  if (pieces.empty()) throw DomainError("multi_to_one: no source pieces");
  T phi_sum(0);
  DenseMatrix<T> out(p + 1, pieces.front().q.cols());
  const auto g = gramian<T>(p);
  const auto gi = gramian_inverse<T>(p);
  for (const auto& pc : pieces) {
    if (pc.q.rows() != static_cast<std::size_t>(p + 1)) throw DomainError("multi_to_one: piece degree mismatch");
    const bool inside = (c < pc.lo || detail::same_knot(c, pc.lo)) && (pc.hi < d || detail::same_knot(pc.hi, d));
    if (!inside || !(pc.lo < pc.hi)) throw DomainError("multi_to_one: piece outside target element");
    const T phi = (pc.hi - pc.lo) / (d - c);
    phi_sum += phi;
    const auto a = interval_transform<T>(p, detail::to_local(pc.lo, c, d), detail::to_local(pc.hi, c, d));
    out += phi * (gi * (a.transpose() * (g * pc.q)));
  }
  bool ok;
  if constexpr (ScalarTraits<T>::exact) {
    ok = phi_sum == T(1);
  } else {
    ok = std::fabs(phi_sum - 1.0) <= 1e-12;
  }
  if (!ok) throw DomainError("multi_to_one: element fractions do not sum to one");
  return out;
}

/// Source element with its extraction operator and local control values.
template <Scalar T>
struct SourceElement {
  T lo, hi;
  DenseMatrix<T> C;
  DenseMatrix<T> P;
};

/// Local spline coefficients on the target element from several source
/// elements that tile it. The caller applies smoothing.
template <Scalar T>
DenseMatrix<T> multi_to_one(int p, const std::vector<SourceElement<T>>& sources, const std::pair<T, T>& target,
                            const DenseMatrix<T>& R_target) {
  std::vector<BernsteinPiece<T>> pieces;
  for (const auto& s : sources) pieces.push_back({s.lo, s.hi, s.C.transpose() * s.P});
  return R_target.transpose() * multi_to_one_bernstein(p, pieces, target);
}

// ---- target-space construction ----

namespace detail {

template <Scalar T>
std::vector<T> expand(const std::vector<std::pair<T, int>>& bps) {
  std::vector<T> k;
  for (const auto& [v, m] : bps) k.insert(k.end(), static_cast<std::size_t>(m), v);
  return k;
}

template <Scalar T>
void require_dirs(const SplineSpace<T>& s, std::size_t n, const char* who) {
  if (n != s.dim()) throw DomainError(std::string(who) + ": need one entry per parametric direction");
}

template <Scalar T>
std::size_t find_breakpoint(const std::vector<std::pair<T, int>>& bps, const T& v, const char* who) {
  for (std::size_t i = 1; i + 1 < bps.size(); ++i)
    if (nearly_equal(bps[i].first, v)) return i;
  throw DomainError(std::string(who) + ": value is not an interior knot");
}

}  // namespace detail

/// Splits the listed elements (per direction) at their midpoints.
template <Scalar T>
SplineSpace<T> refined_space(const SplineSpace<T>& s, const std::vector<std::vector<std::size_t>>& split) {
  detail::require_dirs(s, split.size(), "h_refine");
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    const auto& kv = s.direction(d);
    auto k = kv.knots();
    for (std::size_t e : split[d]) {
      if (e >= kv.num_elements()) throw DomainError("h_refine: element index out of range");
      auto [a, b] = kv.element_bounds(e);
      k.push_back((a + b) / T(2));
    }
    std::sort(k.begin(), k.end());
    dirs.emplace_back(kv.degree(), std::move(k));
  }
  return SplineSpace<T>(std::move(dirs));
}

template <Scalar T>
std::vector<std::vector<std::size_t>> all_elements(const SplineSpace<T>& s) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& kv : s.directions()) {
    std::vector<std::size_t> e(kv.num_elements());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = i;
    out.push_back(std::move(e));
  }
  return out;
}

/// Removes every copy of the listed interior knot values.
template <Scalar T>
SplineSpace<T> coarsened_space(const SplineSpace<T>& s, const std::vector<std::vector<T>>& remove) {
  detail::require_dirs(s, remove.size(), "h_coarsen");
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    auto bps = s.direction(d).breakpoints();
    std::vector<bool> drop(bps.size(), false);
    for (const T& v : remove[d]) drop[detail::find_breakpoint(bps, v, "h_coarsen")] = true;
    std::vector<std::pair<T, int>> kept;
    for (std::size_t i = 0; i < bps.size(); ++i)
      if (!drop[i]) kept.push_back(bps[i]);
    dirs.emplace_back(s.degree(d), detail::expand(kept));
  }
  return SplineSpace<T>(std::move(dirs));
}

/// Raises degree by t and every knot multiplicity by t.
template <Scalar T>
SplineSpace<T> elevated_space(const SplineSpace<T>& s, const std::vector<int>& inc) {
  detail::require_dirs(s, inc.size(), "p_elevate");
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    if (inc[d] < 0) throw DomainError("p_elevate: negative increment");
    auto bps = s.direction(d).breakpoints();
    for (auto& bp : bps) bp.second += inc[d];
    dirs.emplace_back(s.degree(d) + inc[d], detail::expand(bps));
  }
  return SplineSpace<T>(std::move(dirs));
}

/// Lowers degree by t; interior multiplicities drop by t but stay >= 1.
template <Scalar T>
SplineSpace<T> reduced_space(const SplineSpace<T>& s, const std::vector<int>& dec) {
  detail::require_dirs(s, dec.size(), "p_reduce");
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    if (dec[d] < 0) throw DomainError("p_reduce: negative decrement");
    const int q = s.degree(d) - dec[d];
    if (q < 1) throw DomainError("p_reduce: target degree below 1");
    auto bps = s.direction(d).breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const bool end = i == 0 || i + 1 == bps.size();
      bps[i].second = end ? q + 1 : std::max(1, bps[i].second - dec[d]);
    }
    dirs.emplace_back(q, detail::expand(bps));
  }
  return SplineSpace<T>(std::move(dirs));
}

/// Changes multiplicity of listed interior knots by `delta` per listing,
/// keeping it in [1, p].
template <Scalar T>
SplineSpace<T> multiplicity_space(const SplineSpace<T>& s, const std::vector<std::vector<T>>& knots, int delta,
                                  const char* who) {
  detail::require_dirs(s, knots.size(), who);
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    auto bps = s.direction(d).breakpoints();
    for (const T& v : knots[d]) {
      auto& bp = bps[detail::find_breakpoint(bps, v, who)];
      bp.second += delta;
      if (bp.second < 1 || bp.second > s.degree(d)) {
        throw DomainError(std::string(who) + ": multiplicity would leave [1, p]");
      }
    }
    dirs.emplace_back(s.degree(d), detail::expand(bps));
  }
  return SplineSpace<T>(std::move(dirs));
}

/// Moves interior breakpoints to new positions, keeping multiplicities.
template <Scalar T>
SplineSpace<T> reparameterized_space(const SplineSpace<T>& s, const std::vector<std::vector<T>>& positions) {
  detail::require_dirs(s, positions.size(), "reparameterize");
  std::vector<KnotVector<T>> dirs;
  for (std::size_t d = 0; d < s.dim(); ++d) {
    auto bps = s.direction(d).breakpoints();
    if (positions[d].size() + 2 != bps.size()) {
      throw DomainError("reparameterize: need one position per interior breakpoint");
    }
    for (std::size_t i = 0; i < positions[d].size(); ++i) bps[i + 1].first = positions[d][i];
    for (std::size_t i = 1; i < bps.size(); ++i)
      if (!(bps[i - 1].first < bps[i].first)) throw DomainError("reparameterize: knot ordering violated");
    dirs.emplace_back(s.degree(d), detail::expand(bps));
  }
  return SplineSpace<T>(std::move(dirs));
}

// ---- named operations ----

template <Scalar T>
OpResult<T> h_refine(const SplineSpace<T>& s, const ControlNet<T>& net,
                     const std::vector<std::vector<std::size_t>>& split, WeightMode mode = WeightMode::approximate) {
  return project_generic(s, refined_space(s, split), net, mode);
}

template <Scalar T>
OpResult<T> h_coarsen(const SplineSpace<T>& s, const ControlNet<T>& net, const std::vector<std::vector<T>>& remove,
                      WeightMode mode = WeightMode::approximate) {
  return project_generic(s, coarsened_space(s, remove), net, mode);
}

template <Scalar T>
OpResult<T> p_elevate(const SplineSpace<T>& s, const ControlNet<T>& net, const std::vector<int>& inc,
                      WeightMode mode = WeightMode::approximate) {
  return project_generic(s, elevated_space(s, inc), net, mode);
}

template <Scalar T>
OpResult<T> p_reduce(const SplineSpace<T>& s, const ControlNet<T>& net, const std::vector<int>& dec,
                     WeightMode mode = WeightMode::approximate) {
  return project_generic(s, reduced_space(s, dec), net, mode);
}

template <Scalar T>
OpResult<T> k_roughen(const SplineSpace<T>& s, const ControlNet<T>& net, const std::vector<std::vector<T>>& knots,
                      WeightMode mode = WeightMode::approximate) {
  return project_generic(s, multiplicity_space(s, knots, +1, "k_roughen"), net, mode);
}

template <Scalar T>
OpResult<T> k_smooth(const SplineSpace<T>& s, const ControlNet<T>& net, const std::vector<std::vector<T>>& knots,
                     WeightMode mode = WeightMode::approximate) {
  return project_generic(s, multiplicity_space(s, knots, -1, "k_smooth"), net, mode);
}

template <Scalar T>
OpResult<T> reparameterize(const SplineSpace<T>& s, const ControlNet<T>& net,
                           const std::vector<std::vector<T>>& positions, WeightMode mode = WeightMode::approximate) {
  return project_generic(s, reparameterized_space(s, positions), net, mode);
}

}  // namespace bezproj

#endif  // BEZPROJ_SPLINE_OPS_HPP
