#include <gtest/gtest.h>

#include <random>

#include "bezproj/io.hpp"
#include "bezproj/projection.hpp"
#include "bezproj/spline_ops.hpp"
#include "support/oracles.hpp"
#include "support/random_splines.hpp"

using namespace bezproj;
using R = Rational;

namespace {

std::vector<R> rk(std::initializer_list<R> v) { return v; }

DenseMatrix<R> rat(std::initializer_list<std::initializer_list<R>> m) { return DenseMatrix<R>(m); }

template <Scalar T = R>
SplineDocument<T> load(const std::string& name) {
  return parse_spline<T>(read_json_file(oracle::data_path(name)));
}

/// Control values of the functions supported on element e.
template <Scalar T>
DenseMatrix<T> local_points(const SplineSpace<T>& s, const DenseMatrix<T>& pts, std::size_t e) {
  const auto el = s.element(e);
  DenseMatrix<T> out(el.functions.size(), pts.cols());
  for (std::size_t l = 0; l < el.functions.size(); ++l)
    for (std::size_t c = 0; c < pts.cols(); ++c) out(l, c) = pts(el.functions[l], c);
  return out;
}

std::vector<std::vector<R>> rational_samples(int n) {
  std::vector<std::vector<R>> s;
  for (int i = 0; i < n; ++i) s.push_back({R(i, n - 1)});
  return s;
}

template <Scalar T>
void expect_same_curve(const SplineSpace<T>& a, const ControlNet<T>& na, const SplineSpace<T>& b,
                       const ControlNet<T>& nb) {
  for (const auto& s : rational_samples(50)) {
    std::vector<T> st;
    for (const auto& v : s) st.push_back(T(v));
    EXPECT_EQ(evaluate(a, na, st), evaluate(b, nb, st));
  }
}

/// Parametric L2 distance between two curves on [0,1], split at the given breakpoints.
double curve_distance(const SplineDocument<double>& a, const SplineDocument<double>& b, std::vector<double> cuts) {
  cuts.push_back(0);
  cuts.push_back(1);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += oracle::integrate(
        [&](double x) {
          const auto p = evaluate(a.space, a.net, {x});
          const auto q = evaluate(b.space, b.net, {x});
          return (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
        },
        cuts[i], cuts[i + 1]);
  }
  return std::sqrt(total);
}

}  // namespace

// ---- golden element-level matrices ----

TEST(Golden, ElevatedElementChain) {
  const auto doc = load("cubic_double_knots.json");
  const auto up = p_elevate(doc.space, doc.net, {1});
  ASSERT_TRUE(up.exact);
  const auto E = elevation_matrix<R>(3, 4);
  const auto C = doc.space.extraction_operator(1).C;
  const auto Rb = up.space.extraction_operator(1).R;
  const auto expected = Rb.transpose() * (E.transpose() * (C.transpose() * local_points(doc.space, doc.net.points, 1)));
  EXPECT_EQ(local_points(up.space, up.net.points, 1), expected);
}

TEST(Golden, HalvingTransforms) {
  EXPECT_EQ(interval_transform<R>(2, -1, 0), rat({{1, 0, 0}, {R(1, 2), R(1, 2), 0}, {R(1, 4), R(1, 2), R(1, 4)}}));
  EXPECT_EQ(interval_transform<R>(2, 0, 1), rat({{R(1, 4), R(1, 2), R(1, 4)}, {0, R(1, 2), R(1, 2)}, {0, 0, 1}}));
}

TEST(Golden, ReparameterizationMatrices) {
  // restriction of [0,7/10] onto [0,1/2]
  EXPECT_EQ(interval_transform<R>(2, -1, R(3, 7)) * R(49), rat({{49, 0, 0}, {14, 35, 0}, {4, 20, 25}}));
  EXPECT_EQ(interval_transform<R>(2, -1, R(-3, 5)),
            rat({{1, 0, 0}, {R(4, 5), R(1, 5), 0}, {R(16, 25), R(8, 25), R(1, 25)}}));
  // rows of a Bernstein transform sum to one
  const auto a2 = rat({{49, -70, 25}, {0, 14, -10}, {0, 0, 4}}) * R(1, 4);
  EXPECT_EQ(interval_transform<R>(2, -6, 1), a2);
  EXPECT_EQ(interval_transform<R>(2, R(3, 7), 1) * a2, DenseMatrix<R>::identity(3));
}

// ---- generic projection and plans ----

TEST(ProjectGeneric, SameSpaceIsIdentity) {
  const auto doc = load("cubic_double_knots.json");
  const auto r = project_generic(doc.space, doc.space, doc.net);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.net.points, doc.net.points);
  // the full chain with identity transfers gives the same coefficients
  const auto chain = execute(make_plan(doc.space, doc.space), doc.net);
  EXPECT_EQ(chain.net.points, doc.net.points);
}

TEST(ProjectGeneric, DimensionMismatchThrows) {
  const auto a = load("cubic_double_knots.json");
  const auto b = load("patch_2d.json");
  EXPECT_THROW(project_generic(a.space, b.space, a.net), DomainError);
  const SplineSpace<R> shifted(3, rk({0, 0, 0, 0, 2, 2, 2, 2}));
  EXPECT_THROW(project_generic(a.space, shifted, a.net), DomainError);
  ControlNet<R> short_net;
  short_net.points = DenseMatrix<R>(3, 2);
  EXPECT_THROW(project_generic(a.space, elevated_space(a.space, {1}), short_net), DomainError);
}

TEST(SpaceMap, ReparameterizedQuadratic) {
  const SplineSpace<R> src(2, rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  const SplineSpace<R> tgt(2, rk({0, 0, 0, R(7, 10), 1, 1, 1}));
  const auto map = build_space_map(src, tgt);
  EXPECT_EQ(map.sources_of(0), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(map.sources_of(1), (std::vector<std::size_t>{1}));
  const auto& o = map.overlaps[0];
  EXPECT_EQ(o[0][0].phi, R(5, 7));
  EXPECT_EQ(o[0][1].phi, R(2, 7));
  EXPECT_EQ(o[1][0].phi, 1);
  for (const auto& list : o) {
    R sum = 0;
    for (const auto& ov : list) sum += ov.phi;
    EXPECT_EQ(sum, 1);
  }
}

TEST(SpaceMap, TwoDimensionalSources) {
  const auto doc = load("patch_2d.json");
  const auto fine = refined_space(doc.space, all_elements(doc.space));
  const auto map = build_space_map(fine, doc.space);
  // each coarse element is covered by 2 x 2 fine elements
  for (std::size_t e = 0; e < doc.space.num_elements(); ++e) EXPECT_EQ(map.sources_of(e).size(), 4u);
}

TEST(Subspace, Nesting) {
  const SplineSpace<R> a(2, rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  EXPECT_TRUE(is_subspace(a, a));
  EXPECT_TRUE(is_subspace(a, refined_space(a, all_elements(a))));
  EXPECT_TRUE(is_subspace(a, elevated_space(a, {1})));
  EXPECT_TRUE(is_subspace(a, multiplicity_space(a, {{R(1, 2)}}, +1, "test")));
  EXPECT_FALSE(is_subspace(refined_space(a, all_elements(a)), a));
  EXPECT_FALSE(is_subspace(a, reparameterized_space(a, {{R(7, 10)}})));
  EXPECT_FALSE(is_subspace(elevated_space(a, {1}), a));
}

TEST(Plans, ExactChainsHaveNoSmoothing) {
  const SplineSpace<R> a(2, rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  const auto b = refined_space(a, all_elements(a));
  const auto c = elevated_space(b, {1});
  const auto p1 = make_plan(a, b), p2 = make_plan(b, c);
  EXPECT_TRUE(p1.exact());
  const auto both = compose<R>({p1, p2});
  EXPECT_TRUE(both.exact());
  EXPECT_EQ(std::count(both.steps.begin(), both.steps.end(), "smooth"), 0);
  EXPECT_EQ(both.spaces.size(), 3u);
  EXPECT_EQ(compose<R>({p1}).spaces, p1.spaces);
}

TEST(Plans, InexactChainSmoothsOnceAtTheEnd) {
  const SplineSpace<R> a(2, rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  const auto b = reparameterized_space(a, {{R(3, 10)}});
  const auto c = refined_space(b, all_elements(b));
  const auto plan = compose<R>({make_plan(a, b), make_plan(b, c), make_plan(c, elevated_space(c, {1}))});
  EXPECT_FALSE(plan.exact());
  EXPECT_EQ(std::count(plan.steps.begin(), plan.steps.end(), "smooth"), 1);
  EXPECT_EQ(plan.steps.back(), "smooth");
}

TEST(Plans, ComposeRejectsBrokenChain) {
  const SplineSpace<R> a(2, rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  const auto b = refined_space(a, all_elements(a));
  EXPECT_THROW(compose<R>({make_plan(a, b), make_plan(a, b)}), DomainError);
  EXPECT_THROW(compose<R>({}), DomainError);
}

TEST(Plans, ComposedEqualsSequentialOnRandomCurves) {
  std::mt19937 rng(40);
  for (int t = 0; t < 20; ++t) {
    const auto s = fixture::random_spline(rng, 1, 2, t % 2 == 0);
    const auto r1 = h_refine(s.space, s.net, all_elements(s.space));
    const auto r2 = p_elevate(r1.space, r1.net, {1});
    const auto fused = execute(compose<double>({r1.plan, r2.plan}), s.net);
    EXPECT_LE(max_abs_diff(fused.net.points, r2.net.points), 1e-11) << t;
    EXPECT_TRUE(fused.exact);
  }
}

TEST(Plans, ComposedInexactChainErrorRecorded) {
  // fused smoothing happens once, so it may differ from applying two inexact ops in turn;
  // both stay close to the source curve
  const auto doc = load<double>("reparam_nurbs.json");
  const auto a = reparameterize(doc.space, doc.net, {{0.4}});
  const auto b = h_coarsen(a.space, a.net, {{0.4}});
  const auto fused = execute(compose<double>({a.plan, b.plan}), doc.net);
  const double d_seq = spline_distance(doc.space, doc.net, b.space, b.net, 12);
  const double d_fused = spline_distance(doc.space, doc.net, fused.space, fused.net, 12);
  RecordProperty("sequential_distance", std::to_string(d_seq));
  RecordProperty("fused_distance", std::to_string(d_fused));
  EXPECT_FALSE(fused.exact);
  EXPECT_LE(d_fused, d_seq * 1.5 + 1e-12);
}

// ---- element algorithms ----

TEST(LargeToSmall, FirstElementOfGlobalRefinement) {
  const auto doc = load("quadratic_uniform.json");
  const auto fine = refined_space(doc.space, all_elements(doc.space));
  const auto P = local_points(doc.space, doc.net.points, 0);
  const auto C = doc.space.extraction_operator(0).C;
  const auto out = large_to_small<R>(2, {0, R(1, 4)}, C, P, {{0, R(1, 8)}, {R(1, 8), R(1, 4)}},
                                     {fine.extraction_operator(0).R, fine.extraction_operator(1).R});
  ASSERT_EQ(out.size(), 2u);
  // extraction chain for the first child: (R^{e1'})^T A_l (C^{e1})^T P^{e1}
  const auto Al = interval_transform<R>(2, -1, 0);
  EXPECT_EQ(out[0], fine.extraction_operator(0).R.transpose() * (Al * (C.transpose() * P)));
  // functions shared by the two children get identical values
  const auto e0 = fine.element(0), e1 = fine.element(1);
  for (std::size_t l0 = 0; l0 < 3; ++l0)
    for (std::size_t l1 = 0; l1 < 3; ++l1)
      if (e0.functions[l0] == e1.functions[l1]) {
        EXPECT_EQ(out[0](l0, 0), out[1](l1, 0));
        EXPECT_EQ(out[0](l0, 1), out[1](l1, 1));
      }
  const auto global = h_refine(doc.space, doc.net, all_elements(doc.space));
  EXPECT_EQ(out[0], local_points(fine, global.net.points, 0));
  EXPECT_EQ(out[1], local_points(fine, global.net.points, 1));
}

TEST(LargeToSmall, OntoItselfIsIdentity) {
  const auto doc = load("quadratic_uniform.json");
  const auto ops = doc.space.extraction_operator(2);
  const auto P = local_points(doc.space, doc.net.points, 2);
  const auto out = large_to_small<R>(2, {R(1, 2), R(3, 4)}, ops.C, P, {{R(1, 2), R(3, 4)}}, {ops.R});
  EXPECT_EQ(out[0], P);
}

TEST(LargeToSmall, ContainmentViolatedThrows) {
  const auto I = DenseMatrix<R>::identity(3);
  EXPECT_THROW(large_to_small<R>(2, {0, R(1, 2)}, I, I, {{R(1, 4), R(3, 4)}}, {I}), DomainError);
  EXPECT_THROW(large_to_small<R>(2, {0, R(1, 2)}, I, I, {{0, R(1, 4)}}, {}), DomainError);
}

TEST(MultiToOne, HalvesFormula) {
  const auto doc = load("quadratic_uniform.json");
  const auto ops0 = doc.space.extraction_operator(0), ops1 = doc.space.extraction_operator(1);
  const auto P0 = local_points(doc.space, doc.net.points, 0), P1 = local_points(doc.space, doc.net.points, 1);
  const SplineSpace<R> coarse(2, rk({0, 0, 0, R(1, 2), R(3, 4), 1, 1, 1}));
  const auto Rt = coarse.extraction_operator(0).R;
  const auto got = multi_to_one<R>(2, {{0, R(1, 4), ops0.C, P0}, {R(1, 4), R(1, 2), ops1.C, P1}}, {0, R(1, 2)}, Rt);
  const auto G = gramian<R>(2), Gi = gramian_inverse<R>(2);
  const auto Al = interval_transform<R>(2, -1, 0), Ar = interval_transform<R>(2, 0, 1);
  const auto expected =
      Rt.transpose() * (R(1, 2) * (Gi * (Al.transpose() * (G * (ops0.C.transpose() * P0)))) +
                        R(1, 2) * (Gi * (Ar.transpose() * (G * (ops1.C.transpose() * P1)))));
  EXPECT_EQ(got, expected);
}

TEST(MultiToOne, SingleFullSourceIsIdentity) {
  const auto I = DenseMatrix<R>::identity(3);
  const auto q = rat({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(multi_to_one<R>(2, {{0, 1, I, q}}, {0, 1}, I), q);
}

TEST(MultiToOne, PolynomialAcrossSourcesIsRecovered) {
  // a global quadratic cut into three unequal pieces
  const auto f = [](const R& x) { return R(3) * x * x - x + R(1, 5); };
  const std::vector<std::pair<R, R>> cuts{{0, R(1, 5)}, {R(1, 5), R(2, 3)}, {R(2, 3), 1}};
  std::vector<BernsteinPiece<R>> pieces;
  for (const auto& [a, b] : cuts) {
    // quadratic Bernstein coefficients from endpoint and midpoint values
    const R m = (a + b) / 2;
    const R fa = f(a), fb = f(b), fm = f(m);
    DenseMatrix<R> q(3, 1);
    q(0, 0) = fa;
    q(2, 0) = fb;
    q(1, 0) = 2 * fm - (fa + fb) / 2;
    pieces.push_back({a, b, q});
  }
  const auto out = multi_to_one_bernstein<R>(2, pieces, {0, 1});
  EXPECT_EQ(out(0, 0), f(0));
  EXPECT_EQ(out(2, 0), f(1));
  EXPECT_EQ(out(1, 0), 2 * f(R(1, 2)) - (f(0) + f(1)) / 2);
}

TEST(MultiToOne, FractionsMustTile) {
  const auto q = rat({{1}, {1}, {1}});
  EXPECT_THROW(multi_to_one_bernstein<R>(2, {{0, R(1, 2), q}}, {0, 1}), DomainError);
  EXPECT_THROW(multi_to_one_bernstein<R>(2, {{R(1, 2), R(3, 2), q}}, {0, 1}), DomainError);
  EXPECT_THROW(multi_to_one_bernstein<R>(2, {}, {0, 1}), DomainError);
}

TEST(MultiToOne, ResidualOrthogonalToTargetBasis) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const int p = 1 + t % 4;
    const double c = u(rng), d = c + 0.5 + std::fabs(u(rng));
    const double mid = c + (d - c) * (0.2 + 0.6 * std::fabs(u(rng)));
    std::vector<BernsteinPiece<double>> pieces{{c, mid, oracle::random_matrix(rng, p + 1, 1)},
                                               {mid, d, oracle::random_matrix(rng, p + 1, 1)}};
    const auto q = multi_to_one_bernstein<double>(p, pieces, {c, d});
    std::vector<double> qv;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(p); ++i) qv.push_back(q(i, 0));
    for (int j = 0; j <= p; ++j) {
      double r = 0.0;
      for (const auto& pc : pieces) {
        std::vector<double> pv;
        for (std::size_t i = 0; i <= static_cast<std::size_t>(p); ++i) pv.push_back(pc.q(i, 0));
        r += oracle::integrate(
            [&](double x) {
              return oracle::bernstein_on(p, j, c, d, x) *
                     (oracle::bernstein_sum(p, pv, pc.lo, pc.hi, x) - oracle::bernstein_sum(p, qv, c, d, x));
            },
            pc.lo, pc.hi);
      }
      EXPECT_NEAR(r, 0.0, 1e-10) << t << " " << j;
    }
  }
}

TEST(ElementAlgorithms, AgreeWithQuadratureOracle) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    const int p = 1 + t % 4;
    // large to small: restriction of one polynomial piece
    const std::vector<double> q = [&] {
      std::vector<double> v(p + 1);
      for (auto& x : v) x = 2 * u(rng) - 1;
      return v;
    }();
    const double a = 0.0, b = 1.0, lo = 0.3 * u(rng), hi = 0.5 + 0.5 * u(rng);
    DenseMatrix<double> Q(p + 1, 1);
    for (int i = 0; i <= p; ++i) Q(i, 0) = q[i];
    const auto I = DenseMatrix<double>::identity(p + 1);
    const auto small = large_to_small<double>(p, {a, b}, I, Q, {{lo, hi}}, {I})[0];
    const auto ref = oracle::l2_bernstein_fit(p, [&](double x) { return oracle::bernstein_sum(p, q, a, b, x); }, lo, hi);
    for (int i = 0; i <= p; ++i) EXPECT_NEAR(small(i, 0), ref[i], 1e-9);
    // multi to one: piecewise polynomial on three pieces
    const double m1 = 0.2 + 0.2 * u(rng), m2 = 0.6 + 0.2 * u(rng);
    std::vector<BernsteinPiece<double>> pieces;
    for (auto [l, h] : std::vector<std::pair<double, double>>{{0, m1}, {m1, m2}, {m2, 1}})
      pieces.push_back({l, h, oracle::random_matrix(rng, p + 1, 1)});
    const auto pw = [&](double x) {
      for (const auto& pc : pieces)
        if (x <= pc.hi) {
          std::vector<double> v;
          for (int i = 0; i <= p; ++i) v.push_back(pc.q(i, 0));
          return oracle::bernstein_sum(p, v, pc.lo, pc.hi, x);
        }
      return 0.0;
    };
    const auto one = multi_to_one_bernstein<double>(p, pieces, {0, 1});
    // the oracle integrates piecewise so the kinks do not spoil the quadrature
    Eigen::MatrixXd M(p + 1, p + 1);
    Eigen::VectorXd rhs(p + 1);
    for (int i = 0; i <= p; ++i) {
      rhs(i) = 0;
      for (int j = 0; j <= p; ++j)
        M(i, j) = oracle::integrate([&](double x) { return oracle::bernstein(p, i, 2 * x - 1) * oracle::bernstein(p, j, 2 * x - 1); }, 0, 1);
      for (const auto& pc : pieces)
        rhs(i) += oracle::integrate([&](double x) { return oracle::bernstein(p, i, 2 * x - 1) * pw(x); }, pc.lo, pc.hi);
    }
    const Eigen::VectorXd sol = M.ldlt().solve(rhs);
    for (int i = 0; i <= p; ++i) EXPECT_NEAR(one(i, 0), sol(i), 1e-9);
  }
}

// ---- named operations ----

TEST(HRefine, GlobalHalvingOfUniformQuadratic) {
  const auto doc = load("quadratic_uniform.json");
  const auto r = h_refine(doc.space, doc.net, all_elements(doc.space));
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.space.direction(0).knots(),
            rk({0, 0, 0, R(1, 8), R(1, 4), R(3, 8), R(1, 2), R(5, 8), R(3, 4), R(7, 8), 1, 1, 1}));
  expect_same_curve(doc.space, doc.net, r.space, r.net);
}

TEST(HRefine, SelectedSpansOnly) {
  const auto doc = load("quadratic_uniform.json");
  const auto r = h_refine(doc.space, doc.net, {{1, 3}});
  EXPECT_EQ(r.space.direction(0).knots(), rk({0, 0, 0, R(1, 4), R(3, 8), R(1, 2), R(3, 4), R(7, 8), 1, 1, 1}));
  expect_same_curve(doc.space, doc.net, r.space, r.net);
  EXPECT_THROW(h_refine(doc.space, doc.net, {{4}}), DomainError);
  EXPECT_THROW(h_refine(doc.space, doc.net, {{0}, {0}}), DomainError);
}

TEST(HCoarsen, InexactForGeneralCurves) {
  const auto doc = load("quadratic_uniform.json");
  const auto r = h_coarsen(doc.space, doc.net, {{R(1, 4), R(3, 4)}});
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.space.direction(0).knots(), rk({0, 0, 0, R(1, 2), 1, 1, 1}));
  const auto d = load<double>("quadratic_uniform.json");
  const auto rd = h_coarsen(d.space, d.net, {{0.25, 0.75}});
  EXPECT_GT(spline_distance(d.space, d.net, rd.space, rd.net, 8), 1e-3);
  EXPECT_THROW(h_coarsen(doc.space, doc.net, {{R(1, 3)}}), DomainError);
}

TEST(HCoarsen, RefineThenCoarsenIsIdentity) {
  std::mt19937 rng(43);
  for (int t = 0; t < 20; ++t) {
    const auto s = fixture::random_spline(rng, 1 + t % 2, 2, t % 3 == 0);
    const auto fine = h_refine(s.space, s.net, all_elements(s.space));
    const auto back = project_generic(fine.space, s.space, fine.net);
    EXPECT_LE(max_abs_diff(back.net.points, s.net.points), 1e-10) << t;
    if (s.net.weights) {
      for (std::size_t a = 0; a < s.net.weights->size(); ++a) EXPECT_NEAR((*back.net.weights)[a], (*s.net.weights)[a], 1e-10);
    }
  }
}

TEST(HCoarsen, Idempotent) {
  const auto doc = load("quadratic_uniform.json");
  const auto once = h_coarsen(doc.space, doc.net, {{R(1, 4), R(3, 4)}});
  const auto up = project_generic(once.space, doc.space, once.net);
  const auto twice = project_generic(doc.space, once.space, up.net);
  EXPECT_EQ(twice.net.points, once.net.points);
}

TEST(PElevate, CubicWithDoubleKnots) {
  const auto doc = load("cubic_double_knots.json");
  const auto r = p_elevate(doc.space, doc.net, {1});
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.space.degree(), 4);
  EXPECT_EQ(r.space.direction(0).knots(),
            rk({0, 0, 0, 0, 0, R(1, 3), R(1, 3), R(1, 3), R(2, 3), R(2, 3), R(2, 3), 1, 1, 1, 1, 1}));
  expect_same_curve(doc.space, doc.net, r.space, r.net);
}

TEST(PReduce, RecoversElevatedQuadratic) {
  const auto doc = load("quadratic_two_elements.json");
  const auto up = p_elevate(doc.space, doc.net, {1});
  const auto down = p_reduce(up.space, up.net, {1});
  EXPECT_FALSE(down.exact);
  EXPECT_EQ(down.space, doc.space);
  EXPECT_EQ(down.net.points, doc.net.points);
}

TEST(PReduce, NurbsThroughHomogeneousCoordinates) {
  const auto doc = load("reparam_nurbs.json");
  const auto up = p_elevate(doc.space, doc.net, {2});
  expect_same_curve(doc.space, doc.net, up.space, up.net);
  const auto down = p_reduce(up.space, up.net, {2});
  EXPECT_EQ(down.net.points, doc.net.points);
  EXPECT_EQ(*down.net.weights, *doc.net.weights);
}

TEST(PReduce, BelowLinearThrows) {
  const auto doc = load("quadratic_two_elements.json");
  EXPECT_THROW(p_reduce(doc.space, doc.net, {2}), DomainError);
}

TEST(KRoughen, FullMultiplicityGivesIdentityOperators) {
  const auto doc = load("cubic_double_knots.json");
  const auto r = k_roughen(doc.space, doc.net, {{R(1, 3), R(2, 3)}});
  EXPECT_TRUE(r.exact);
  for (std::size_t e = 0; e < r.space.num_elements(); ++e) {
    EXPECT_EQ(r.space.extraction_operator(e).C, DenseMatrix<R>::identity(4));
    EXPECT_EQ(r.space.extraction_operator(e).R, DenseMatrix<R>::identity(4));
  }
  expect_same_curve(doc.space, doc.net, r.space, r.net);
}

TEST(KSmooth, UsesCoarsenedOperators) {
  const auto doc = load("cubic_double_knots.json");
  const auto r = k_smooth(doc.space, doc.net, {{R(1, 3), R(2, 3)}});
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.space.direction(0).knots(), rk({0, 0, 0, 0, R(1, 3), R(2, 3), 1, 1, 1, 1}));
  // same Bezier mesh: the middle element's local result is (R^{e,b})^T (C^{e,a})^T P^{e,a} before smoothing
  const auto Cb = r.space.extraction_operator(1);
  EXPECT_EQ(Cb.R, rat({{4, 0, 0, 0}, {-4, 2, -1, 1}, {1, -1, 2, -4}, {0, 0, 0, 4}}));
  const auto field = to_bernstein(doc.space, doc.net.points);
  const auto moved = transfer(field, r.space);
  EXPECT_EQ(moved.q[1], field.q[1]);
}

TEST(KRoughen, ThenSmoothIsIdentityForSmoothCurves) {
  std::mt19937 rng(44);
  for (int t = 0; t < 20; ++t) {
    const int p = 2 + t % 3;
    const SplineSpace<double> s({oracle::random_kv(rng, p, 2 + t % 4, 1)});
    ControlNet<double> net;
    net.points = oracle::random_matrix(rng, s.num_functions(), 2);
    if (t % 2) net.weights = oracle::random_weights(rng, s.num_functions());
    const double knot = s.direction(0).breakpoints()[1].first;
    const auto rough = k_roughen(s, net, {{knot}});
    const auto smooth = k_smooth(rough.space, rough.net, {{knot}});
    EXPECT_EQ(smooth.space, s);
    EXPECT_LE(max_abs_diff(smooth.net.points, net.points), 1e-10) << t;
  }
}

TEST(KRoughen, MultiplicityBounds) {
  const auto doc = load("cubic_double_knots.json");
  const auto full = k_roughen(doc.space, doc.net, {{R(1, 3)}});
  EXPECT_THROW(k_roughen(full.space, full.net, {{R(1, 3)}}), DomainError);
  const SplineSpace<R> simple(3, rk({0, 0, 0, 0, R(1, 3), R(2, 3), 1, 1, 1, 1}));
  ControlNet<R> net;
  net.points = DenseMatrix<R>(6, 1);
  EXPECT_THROW(k_smooth(simple, net, {{R(1, 3)}}), DomainError);
  EXPECT_THROW(k_roughen(simple, net, {{R(1, 2)}}), DomainError);
}

TEST(Reparameterize, MatchesElementAlgorithms) {
  const auto doc = load("quadratic_two_elements.json");
  const auto r = reparameterize(doc.space, doc.net, {{R(7, 10)}});
  EXPECT_FALSE(r.exact);
  const auto& s = doc.space;
  const auto q0 = s.extraction_operator(0).C.transpose() * local_points(s, doc.net.points, 0);
  const auto q1 = s.extraction_operator(1).C.transpose() * local_points(s, doc.net.points, 1);
  // target [0,7/10]: all of source 0 and the trimmed left part of source 1
  const auto trimmed = interval_transform<R>(2, -1, R(-1, 5)) * q1;
  const auto b0 = multi_to_one_bernstein<R>(2, {{0, R(1, 2), q0}, {R(1, 2), R(7, 10), trimmed}}, {0, R(7, 10)});
  // target [7/10,1] lies inside source 1
  const auto b1 = interval_transform<R>(2, R(-1, 5), 1) * q1;
  const auto l0 = r.space.extraction_operator(0).R.transpose() * b0;
  const auto l1 = r.space.extraction_operator(1).R.transpose() * b1;
  DenseMatrix<R> expected(4, 2);
  for (std::size_t c = 0; c < 2; ++c) {
    expected(0, c) = l0(0, c);
    expected(1, c) = R(13, 16) * l0(1, c) + R(3, 16) * l1(0, c);
    expected(2, c) = R(7, 24) * l0(2, c) + R(17, 24) * l1(1, c);
    expected(3, c) = l1(2, c);
  }
  EXPECT_EQ(r.net.points, expected);
}

TEST(Reparameterize, NoMoveIsIdentity) {
  const auto doc = load("reparam_nurbs.json");
  const auto r = reparameterize(doc.space, doc.net, {{R(1, 2)}});
  EXPECT_EQ(r.net.points, doc.net.points);
  EXPECT_EQ(*r.net.weights, *doc.net.weights);
}

TEST(Reparameterize, LeftShiftCloserForFixture) {
  const auto doc = load<double>("reparam_nurbs.json");
  const auto left = reparameterize(doc.space, doc.net, {{0.3}});
  const auto right = reparameterize(doc.space, doc.net, {{0.7}});
  const double dl = curve_distance(doc, {left.space, left.net}, {0.3, 0.5});
  const double dr = curve_distance(doc, {right.space, right.net}, {0.5, 0.7});
  RecordProperty("left_distance", std::to_string(dl));
  RecordProperty("right_distance", std::to_string(dr));
  EXPECT_GT(dl, 0.0);
  EXPECT_GT(dr, 0.0);
  EXPECT_LT(dl, dr);
}

TEST(Reparameterize, OrderingViolationThrows) {
  const auto doc = load("cubic_double_knots.json");
  EXPECT_THROW(reparameterize(doc.space, doc.net, {{R(3, 4), R(1, 2)}}), DomainError);
  EXPECT_THROW(reparameterize(doc.space, doc.net, {{R(1, 2)}}), DomainError);
}

TEST(NestedOps, ExactOnRandomCurvesAndSurfaces) {
  std::mt19937 rng(45);
  for (int t = 0; t < 50; ++t) {
    const std::size_t dim = 1 + t % 2;
    const auto s = fixture::random_spline(rng, dim, 3, t % 2 == 0);
    const auto pts = fixture::sample_points(rng, s.space, 100);
    const auto refined = h_refine(s.space, s.net, all_elements(s.space));
    const auto elevated = p_elevate(s.space, s.net, std::vector<int>(dim, 1));
    std::vector<std::vector<double>> rough_knots(dim);
    for (std::size_t d = 0; d < dim; ++d)
      for (const auto& [v, m] : s.space.direction(d).breakpoints())
        if (m < s.space.degree(d) && v > s.space.direction(d).front() && v < s.space.direction(d).back())
          rough_knots[d].push_back(v);
    const auto rough = k_roughen(s.space, s.net, rough_knots);
    for (const auto* r : {&refined, &elevated, &rough}) {
      EXPECT_TRUE(r->exact);
      EXPECT_LE(fixture::max_deviation(s.space, s.net, r->space, r->net, pts), 1e-10) << t;
    }
  }
}

TEST(Kronecker, FactoredTransferMatchesDenseOperators) {
  const auto doc = load<double>("patch_2d.json");
  const auto target = elevated_space(refined_space(doc.space, all_elements(doc.space)), {1, 1});
  const auto r = project_generic(doc.space, target, doc.net);
  ASSERT_TRUE(r.exact);
  const auto H = doc.net.homogeneous();
  const auto map = build_space_map(doc.space, target);
  for (std::size_t e = 0; e < target.num_elements(); ++e) {
    const auto src = map.sources_of(e);
    ASSERT_EQ(src.size(), 1u);
    const auto es = doc.space.element(src[0]);
    const auto et = target.element(e);
    std::vector<DenseMatrix<double>> m;
    for (std::size_t d = 0; d < 2; ++d)
      m.push_back(transfer_matrix_1d<double>(doc.space.degree(d), es.lo[d], es.hi[d], target.degree(d), et.lo[d],
                                             et.hi[d], et.lo[d], et.hi[d]));
    const auto M = kron(m[1], m[0]);
    const auto dense = target.extraction_operator(e).R.transpose() *
                       (M * (doc.space.extraction_operator(src[0]).C.transpose() * local_points(doc.space, H, src[0])));
    const auto got = local_points(target, r.net.homogeneous(), e);
    EXPECT_LE(max_abs_diff(dense, got), 1e-12) << e;
  }
}

TEST(Nurbs, WeightsFollowTheSameOperation) {
  const auto doc = load("patch_2d.json");
  const auto r = p_elevate(doc.space, doc.net, {1, 0});
  ControlNet<R> w;
  w.points = DenseMatrix<R>(doc.space.num_functions(), 1);
  for (std::size_t a = 0; a < w.points.rows(); ++a) w.points(a, 0) = (*doc.net.weights)[a];
  const auto rw = p_elevate(doc.space, w, {1, 0});
  for (std::size_t a = 0; a < rw.net.points.rows(); ++a) EXPECT_EQ((*r.net.weights)[a], rw.net.points(a, 0));
  for (const auto& s : rational_samples(7))
    for (const auto& t : rational_samples(5)) EXPECT_EQ(evaluate(doc.space, doc.net, {s[0], t[0]}), evaluate(r.space, r.net, {s[0], t[0]}));
}
