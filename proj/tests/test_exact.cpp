#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "toric/config.hpp"
#include "toric/exact_linalg.hpp"
#include "toric/exact_lp.hpp"
#include "toric/polytope.hpp"
#include "toric/quadric_config.hpp"
#include "toric/torus_actions.hpp"

using namespace toric;

namespace {

IntegerMatrix ints(std::initializer_list<std::initializer_list<Integer>> rows) { return IntegerMatrix(rows); }

RationalVector rats(std::initializer_list<int> xs) {
  RationalVector out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

PolytopePresentation triangle() { return PolytopePresentation(ints({{1, 0}, {0, 1}, {-1, -1}}), rats({0, 0, 1})); }
PolytopePresentation bad_triangle() {
  return PolytopePresentation(ints({{1, 0}, {0, 1}, {-1, -2}}), rats({0, 0, 1}));
}
PolytopePresentation square() {
  return PolytopePresentation(ints({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), rats({0, 0, 1, 1}));
}

PolytopePresentation cube(std::size_t n) {
  IntegerMatrix normals(2 * n, n);
  RationalVector b(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    normals(i, i) = 1;
    normals(n + i, i) = -1;
    b[n + i] = 1;
  }
  return {normals, b};
}

}  // namespace

// ---------------------------------------------------------------------------
// exact linear algebra

TEST(Nullspace, TriangleNormalsGiveAllOnes) {
  const IntegerMatrix at = ints({{1, 0}, {0, 1}, {-1, -1}});
  const RationalMatrix ns = rational_nullspace(at, NullSide::Left);
  ASSERT_EQ(ns.rows(), 1u);
  EXPECT_EQ(to_string(ns.row(0)), "(1,1,1)");
}

TEST(Nullspace, FullRankHasNoRows) {
  EXPECT_EQ(rational_nullspace(IntegerMatrix::identity(2)).rows(), 0u);
}

TEST(Nullspace, SingleRow) {
  const RationalMatrix ns = rational_nullspace(ints({{1, 1}}));
  ASSERT_EQ(ns.rows(), 1u);
  EXPECT_EQ(to_string(ns.row(0)), "(1,-1)");
}

TEST(Nullspace, EmptyMatrix) { EXPECT_EQ(rational_nullspace(IntegerMatrix(0, 0)).rows(), 0u); }

TEST(NullspaceProperty, AnnihilatesAndHasComplementaryDimension) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 5;
    IntegerMatrix m = oracle::random_integer_matrix(r, c, 3, rng);
    if (trial % 3 == 0 && r > 1)  // force a dependent row
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    for (const NullSide side : {NullSide::Right, NullSide::Left}) {
      const RationalMatrix ns = rational_nullspace(m, side);
      const std::size_t dim = side == NullSide::Right ? c : r;
      const std::size_t rk = oracle::rank_by_minors(m);
      EXPECT_EQ(ns.rows() + rk, dim);
      for (std::size_t i = 0; i < ns.rows(); ++i) {
        const RationalVector y = ns.row(i);
        // canonical form: integer, primitive, positive leading entry
        Integer g = 0;
        bool lead_seen = false;
        for (const auto& e : y) {
          ASSERT_EQ(boost::multiprecision::denominator(e), 1);
          g = oracle::gcd(g, boost::multiprecision::numerator(e));
          if (!lead_seen && e != 0) {
            EXPECT_GT(e, 0);
            lead_seen = true;
          }
        }
        EXPECT_EQ(g, 1);
        const RationalMatrix mr = to_rational(m);
        const RationalVector prod = side == NullSide::Right ? mr * y : mr.transpose() * y;
        for (const auto& e : prod) EXPECT_EQ(e, 0);
      }
      EXPECT_EQ(rank(ns), ns.rows());
    }
  }
}

TEST(Smith, Diag23) {
  const auto s = smith_normal_form(ints({{2, 0}, {0, 3}}));
  EXPECT_EQ(s.D, ints({{1, 0}, {0, 6}}));
}

TEST(Smith, Identity) {
  const auto s = smith_normal_form(IntegerMatrix::identity(3));
  EXPECT_EQ(s.D, IntegerMatrix::identity(3));
}

TEST(Smith, Row24) {
  const auto s = smith_normal_form(ints({{2, 4}}));
  EXPECT_EQ(s.D, ints({{2, 0}}));
}

TEST(SmithProperty, FactorizationDivisibilityAndUnimodularity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    const IntegerMatrix m = oracle::random_integer_matrix(r, c, 6, rng);
    const auto s = smith_normal_form(m);
    EXPECT_EQ(s.U * m * s.V, s.D);
    EXPECT_EQ(abs(determinant(s.U)), 1);
    EXPECT_EQ(abs(determinant(s.V)), 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) EXPECT_EQ(s.D(i, j), 0);
    const auto expected = oracle::invariant_factors(m);
    ASSERT_EQ(s.rank(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      EXPECT_EQ(s.D(k, k), expected[k]);
      if (k + 1 < expected.size()) EXPECT_EQ(s.D(k + 1, k + 1) % s.D(k, k), 0);
    }
  }
}

TEST(Sublattice, Examples) {
  EXPECT_TRUE(sublattice_equals_lattice(ints({{1}}), ints({{1}, {2}})));
  EXPECT_FALSE(sublattice_equals_lattice(ints({{2}}), ints({{1}, {2}})));
  EXPECT_TRUE(sublattice_equals_lattice(ints({{1, 1}, {1, 2}}), ints({{1, 0}, {0, 1}})));
}

TEST(Sublattice, DimensionMismatchThrows) {
  EXPECT_THROW(sublattice_equals_lattice(ints({{1, 0}}), ints({{1}})), DimensionError);
}

TEST(SublatticeProperty, SymmetricAndMonotone) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const IntegerMatrix full = oracle::random_integer_matrix(3, 2, 3, rng);
    const IntegerMatrix sub = full.select_rows({0, 1});
    const bool eq = sublattice_equals_lattice(sub, full);
    if (eq) EXPECT_TRUE(sublattice_equals_lattice(full, sub));
    // adding a row of `full` to `sub` never breaks equality
    if (eq) EXPECT_TRUE(sublattice_equals_lattice(vstack(sub, full.select_rows({2})), full));
    // oracle: equal iff the 2x2 minors of sub and of full have the same gcd
    // and sub spans the same rational space (the rows of full lie in Z-span
    // of sub's saturation); check the index form when sub has rank 2
    if (oracle::rank_by_minors(sub) == 2 && oracle::rank_by_minors(full) == 2) {
      const auto fs = oracle::invariant_factors(sub), ff = oracle::invariant_factors(full);
      EXPECT_EQ(eq, fs[0] * fs[1] == ff[0] * ff[1]);
    }
  }
}

// ---------------------------------------------------------------------------
// exact LP

TEST(ExactLp, FeasibilityAndInfeasibility) {
  // x + y = 1, x, y >= 0
  RationalMatrix a(1, 2);
  a(0, 0) = 1;
  a(0, 1) = 1;
  const auto x = feasible_point(a, rats({1}));
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0] + (*x)[1], 1);
  EXPECT_FALSE(feasible_point(a, rats({-1})));
}

TEST(ExactLp, OptimumOfSmallProgram) {
  // min -x - 2y  s.t. x + y + s = 4, x, y, s >= 0  ->  y = 4
  RationalMatrix a(1, 3);
  a(0, 0) = a(0, 1) = a(0, 2) = 1;
  const auto r = solve_lp(a, rats({4}), rats({-1, -2, 0}));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, -8);
  EXPECT_EQ(r.x[1], 4);
}

TEST(ExactLp, StrictlyPositiveCombination) {
  EXPECT_TRUE(strictly_positive_combination(ints({{1, 1, 1}}), {0, 2}, rats({1})));
  EXPECT_FALSE(strictly_positive_combination(ints({{1, -1}}), {1}, rats({1})));
}

// ---------------------------------------------------------------------------
// polytopes

TEST(Vertices, Triangle) {
  const auto vs = enumerate_vertices(triangle());
  std::vector<std::string> got;
  for (const auto& v : vs) got.push_back(to_string(v.point));
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"(0,0)", "(0,1)", "(1,0)"}));
}

TEST(Vertices, SquareAndSegment) {
  EXPECT_EQ(enumerate_vertices(square()).size(), 4u);
  const PolytopePresentation seg(ints({{1}, {-1}}), rats({0, 1}));
  const auto vs = enumerate_vertices(seg);
  std::vector<std::string> got;
  for (const auto& v : vs) got.push_back(to_string(v.point));
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"(0)", "(1)"}));
}

TEST(Vertices, AgreeWithCramerOracle) {
  for (const auto& p : {triangle(), square(), bad_triangle(), cube(3)}) {
    const auto vs = enumerate_vertices(p);
    for (const auto& v : vs) {
      // every vertex satisfies all inequalities, active ones with equality
      const RationalVector y = embed_point(p, v.point);
      for (std::size_t i = 0; i < y.size(); ++i) {
        EXPECT_GE(y[i], 0);
        const bool active = std::find(v.active.begin(), v.active.end(), i) != v.active.end();
        EXPECT_EQ(active, y[i] == 0);
      }
      // re-solve from the first n active facets
      std::vector<std::vector<Rational>> a;
      RationalVector rhs;
      for (std::size_t r = 0; r < p.dimension(); ++r) {
        std::vector<Rational> row;
        for (std::size_t j = 0; j < p.dimension(); ++j) row.emplace_back(p.normals()(v.active[r], j));
        a.push_back(row);
        rhs.push_back(-p.offsets()[v.active[r]]);
      }
      EXPECT_EQ(oracle::cramer(a, rhs), v.point);
    }
  }
}

TEST(Vertices, CubeCount) {
  for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(enumerate_vertices(cube(n)).size(), std::size_t{1} << n);
}

TEST(Vertices, UnboundedAndEmptyRejected) {
  EXPECT_THROW(enumerate_vertices(PolytopePresentation(ints({{1, 0}, {0, 1}}), rats({0, 0}))), PolytopeError);
  EXPECT_THROW(PolytopePresentation(ints({{1}, {-1}}), rats({0, -1})), PolytopeError);
}

TEST(Simple, Examples) {
  EXPECT_TRUE(is_simple(triangle()).simple);
  EXPECT_TRUE(is_simple(cube(3)).simple);
  // square pyramid: base z >= 0 and four slanted facets meeting at (0,0,1)
  const PolytopePresentation pyramid(ints({{0, 0, 1}, {-1, 0, -1}, {1, 0, -1}, {0, -1, -1}, {0, 1, -1}}),
                                     rats({0, 1, 1, 1, 1}));
  const auto v = is_simple(pyramid);
  EXPECT_FALSE(v.simple);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(to_string(v.witness->point), "(0,0,1)");
  EXPECT_EQ(v.witness->active.size(), 4u);
  EXPECT_THROW(is_delzant(pyramid), PolytopeError);
}

TEST(Delzant, Examples) {
  EXPECT_TRUE(is_delzant(triangle()).delzant);
  EXPECT_TRUE(is_delzant(square()).delzant);
  const auto v = is_delzant(bad_triangle());
  EXPECT_FALSE(v.delzant);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(abs(v.determinant), 2);
  // oracle: the witness's active normals have |det| 2
  std::vector<std::vector<Rational>> a;
  for (auto i : v.witness->active) a.push_back({Rational(bad_triangle().normals()(i, 0)), Rational(bad_triangle().normals()(i, 1))});
  EXPECT_EQ(oracle::det(a), Rational(v.determinant));
}

TEST(Delzant, NormalsArePrimitivized) {
  const PolytopePresentation p(ints({{2, 0}, {0, 1}, {-1, -1}}), rats({0, 0, 1}));
  EXPECT_EQ(p.normals(), ints({{1, 0}, {0, 1}, {-1, -1}}));
  EXPECT_TRUE(is_delzant(p).delzant);
}

TEST(Embed, Examples) {
  EXPECT_EQ(to_string(embed_point(triangle(), rats({0, 0}))), "(0,0,1)");
  EXPECT_EQ(to_string(embed_point(triangle(), rats({1, 0}))), "(1,0,0)");
  EXPECT_EQ(to_string(embed_point(square(), {Rational(1, 2), Rational(1, 2)})), "(1/2,1/2,1/2,1/2)");
}

TEST(EmbedProperty, GaleImageIsConstant) {
  std::mt19937_64 rng(3);
  for (const auto& name : {"triangle", "square", "simplex:3", "simplex-product:2,3"}) {
    const auto p = polytope_of(catalog_config(name));
    const auto q = gale_dual(p);
    const RationalMatrix g = to_rational(q.gamma());
    for (int i = 0; i < 20; ++i) {
      RationalVector x(p.dimension());
      for (auto& e : x) e = oracle::random_rational(rng);
      EXPECT_EQ(g * embed_point(p, x), g * p.offsets()) << name;
    }
  }
}

TEST(DelzantProperty, DelzantImpliesSimple) {
  for (const auto& name : catalog_names()) {
    const auto cfg = catalog_config(name);
    if (cfg.mode != ConfigMode::Polytope) continue;
    const auto p = polytope_of(cfg);
    if (is_simple(p).simple && is_delzant(p).delzant) SUCCEED();
    if (!is_simple(p).simple) EXPECT_THROW(is_delzant(p), PolytopeError);
  }
}

// ---------------------------------------------------------------------------
// quadric configurations

TEST(Gale, Examples) {
  const auto t = gale_dual(triangle());
  EXPECT_EQ(t.gamma(), ints({{1, 1, 1}}));
  EXPECT_EQ(t.c(), rats({1}));
  const auto s = gale_dual(square());
  EXPECT_EQ(s.gamma(), ints({{1, 0, 1, 0}, {0, 1, 0, 1}}));
  EXPECT_EQ(s.c(), rats({1, 1}));
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto q = gale_dual(polytope_of(catalog_config("simplex:" + std::to_string(n))));
    ASSERT_EQ(q.quadric_count(), 1u);
    for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(q.gamma()(0, k), 1);
  }
}

TEST(Gale, AnnihilatesNormalsForCatalog) {
  for (const auto& name : catalog_names()) {
    const auto cfg = catalog_config(name);
    if (cfg.mode != ConfigMode::Polytope) continue;
    const auto p = polytope_of(cfg);
    EXPECT_TRUE((gale_dual(p).gamma() * p.matrix_a().transpose()).is_zero()) << name;
  }
}

TEST(Membership, Examples) {
  const QuadricConfiguration q(ints({{1, 1, 1}}), rats({1}));
  Eigen::VectorXcd z(3);
  z << 1, 0, 0;
  EXPECT_EQ(membership_residual(q, z), 0.0);
  EXPECT_EQ(membership_residual(q, Eigen::VectorXcd::Zero(3).eval()), 1.0);
  const auto s = gale_dual(square());
  Eigen::VectorXcd w(4);
  w << 1, 0, 0, 1;
  EXPECT_EQ(membership_residual(s, w), 0.0);
  EXPECT_THROW(membership_residual(s, z), DimensionError);
}

TEST(Boundedness, Examples) {
  const auto b = boundedness_check(QuadricConfiguration(ints({{1, 1, 1}}), rats({1})));
  EXPECT_TRUE(b.bounded);
  EXPECT_FALSE(boundedness_check(QuadricConfiguration(ints({{1, -1}}), rats({1}))).bounded);
  const auto two = boundedness_check(QuadricConfiguration(ints({{1, 1, 1, 1}, {1, 1, -1, -1}}), rats({2, 0})));
  ASSERT_TRUE(two.bounded);
  // witness check: <h, gamma_k> > 0 for each column
  const IntegerMatrix g = ints({{1, 1, 1, 1}, {1, 1, -1, -1}});
  for (std::size_t k = 0; k < 4; ++k) EXPECT_GT((*two.functional)[0] * g(0, k) + (*two.functional)[1] * g(1, k), 0);
}

TEST(BoundednessProperty, SampledPointsRespectTheBound) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  for (const auto& name : {"triangle", "square", "simplex-product:2,3", "two-quadrics:2,2"}) {
    const auto q = quadrics_of(catalog_config(name));
    const auto b = boundedness_check(q);
    ASSERT_TRUE(b.bounded);
    const Eigen::MatrixXd g = q.gamma_numeric();
    Eigen::VectorXd h(g.rows());
    for (Eigen::Index j = 0; j < h.size(); ++j) h(j) = (*b.functional)[j].convert_to<double>();
    const double hc = h.dot(q.c_numeric());
    for (int i = 0; i < 20; ++i) {
      // a point of Z: |z_k|^2 = t_k with Gamma t = c, t >= 0
      std::vector<std::size_t> all(q.ambient_dimension());
      for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
      const auto t = strictly_positive_combination(q.gamma(), all, q.c());
      ASSERT_TRUE(t);
      for (std::size_t k = 0; k < all.size(); ++k) {
        const double bound = hc / h.dot(g.col(static_cast<Eigen::Index>(k)));
        EXPECT_LE((*t)[k].convert_to<double>(), bound + 1e-12);
      }
    }
    (void)gauss;
  }
}

TEST(Nondegeneracy, Examples) {
  const auto a = nondegeneracy_check(QuadricConfiguration(ints({{1, 1, 1}}), rats({1})));
  EXPECT_TRUE(a.cond_a && a.cond_b && a.cond_c);
  const auto b = nondegeneracy_check(QuadricConfiguration(ints({{1, -1}}), rats({0})));
  EXPECT_FALSE(b.cond_b);
  ASSERT_TRUE(b.b_witness);
  EXPECT_TRUE(b.b_witness->empty());
  const auto c = nondegeneracy_check(QuadricConfiguration(ints({{2, 2, 2}}), rats({1})));
  EXPECT_TRUE(c.cond_a);
  EXPECT_TRUE(c.cond_c);
  EXPECT_EQ(c.lattice_rank, 1u);
  // the witness of (a) verifies exactly
  ASSERT_TRUE(c.a_witness);
  Rational sum = 0;
  for (const auto& x : *c.a_witness) {
    EXPECT_GE(x, 0);
    sum += 2 * x;
  }
  EXPECT_EQ(sum, 1);
}

TEST(Nondegeneracy, HoldsForDelzantCatalogPolytopes) {
  for (const auto& name : catalog_names()) {
    const auto cfg = catalog_config(name);
    if (cfg.mode != ConfigMode::Polytope) continue;
    const auto p = polytope_of(cfg);
    if (!is_delzant(p).delzant) continue;
    EXPECT_TRUE(nondegeneracy_check(gale_dual(p)).all()) << name;
  }
}

TEST(MomentMap, Examples) {
  const QuadricConfiguration q(ints({{1, 1, 1}}), rats({1}));
  Eigen::VectorXcd z(3);
  z << 1, 0, 0;
  EXPECT_EQ(moment_map(q, z)(0), 1.0);
  EXPECT_EQ(moment_map(q, Eigen::VectorXcd::Zero(3).eval())(0), 0.0);
  const auto s = gale_dual(square());
  Eigen::VectorXcd w(4);
  w << 1, 1, 0, 0;
  EXPECT_EQ(moment_map(s, w), Eigen::Vector2d(1, 1));
}

TEST(TwoQuadrics, AlreadyCanonical) {
  const auto nf = two_quadrics_canonical(QuadricConfiguration(ints({{1, 1, 1, 1}, {1, 1, -1, -1}}), rats({2, 0})));
  EXPECT_EQ(nf.p, 2u);
  EXPECT_EQ(nf.q, 2u);
  EXPECT_TRUE(nf.is_split_form());
}

TEST(TwoQuadrics, ProductOfSpheres) {
  const QuadricConfiguration q(ints({{2, 2, 0, 0}, {0, 0, 2, 2}}), rats({2, 2}));
  const auto nf = two_quadrics_canonical(q);
  EXPECT_EQ(nf.p, 2u);
  EXPECT_EQ(nf.q, 2u);
  EXPECT_TRUE(nf.is_split_form());
  // the transform reproduces the canonical rows from the input rows
  const IntegerMatrix moved = nf.transform * q.gamma();
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(moved(i, nf.column_order[j]), nf.canonical.gamma()(i, j));
}

TEST(TwoQuadrics, NoSignPatternRejected) {
  EXPECT_THROW(two_quadrics_canonical(QuadricConfiguration(ints({{1, -1}, {1, 1}}), rats({1, 0}))), NormalFormError);
}

TEST(TwoQuadrics, CanonicalEquationsSplitIntoSpheres) {
  // (row0 + row1) / 2 and (row0 - row1) / 2 are sphere equations in disjoint
  // coordinate blocks: R_Gamma = S^{p-1} x S^{q-1}
  for (const auto& [p, qq] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    const auto q = quadrics_of(catalog_config("two-quadrics:" + std::to_string(p) + "," + std::to_string(qq)));
    const auto nf = two_quadrics_canonical(q);
    ASSERT_TRUE(nf.is_split_form());
    const auto& g = nf.canonical.gamma();
    for (std::size_t k = 0; k < g.cols(); ++k) {
      const Integer plus = g(0, k) + g(1, k), minus = g(0, k) - g(1, k);
      if (k < nf.p) {
        EXPECT_GT(plus, 0);
        EXPECT_EQ(minus, 0);
      } else {
        EXPECT_EQ(plus, 0);
        EXPECT_GT(minus, 0);
      }
    }
    EXPECT_GT(nf.canonical.c()[0] + nf.canonical.c()[1], 0);
    EXPECT_GT(nf.canonical.c()[0] - nf.canonical.c()[1], 0);
  }
}

// ---------------------------------------------------------------------------
// torus actions

TEST(Freeness, Examples) {
  EXPECT_TRUE(freeness_check(QuadricConfiguration(ints({{1, 1, 1}}), rats({1}))).free);
  const auto v = freeness_check(QuadricConfiguration(ints({{1, 2}}), rats({1})));
  EXPECT_FALSE(v.free);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(*v.witness, std::vector<std::size_t>{1});
  EXPECT_TRUE(freeness_check(QuadricConfiguration(ints({{1, 1, 1}, {1, 1, 2}}), rats({2, 3}))).free);
}

TEST(Freeness, RequiresFullRankLattice) {
  // rows independent over Q but the columns (1,1),(1,1) span a rank-1 lattice
  EXPECT_THROW(freeness_check(QuadricConfiguration(ints({{1, 1}, {1, 1}}), rats({1, 1}))), PreconditionError);
}

TEST(Freeness, EqualsDelzantOnCatalog) {
  int checked = 0;
  bool saw_failure = false;
  for (const auto& name : catalog_names()) {
    const auto cfg = catalog_config(name);
    if (cfg.mode != ConfigMode::Polytope) continue;
    const auto p = polytope_of(cfg);
    const bool delzant = is_delzant(p).delzant;
    EXPECT_EQ(freeness_check(gale_dual(p)).free, delzant) << name;
    saw_failure |= !delzant;
    ++checked;
  }
  EXPECT_GE(checked, 6);
  EXPECT_TRUE(saw_failure);
}

TEST(FreenessProperty, OneQuadricFreeIffCoefficientsEqual) {
  for (std::size_t m = 2; m <= 3; ++m) {
    std::vector<int> g(m, 1);
    for (;;) {
      IntegerMatrix row(1, m);
      for (std::size_t k = 0; k < m; ++k) row(0, k) = g[k];
      const bool equal = std::all_of(g.begin(), g.end(), [&](int x) { return x == g[0]; });
      EXPECT_EQ(freeness_check(QuadricConfiguration(row, rats({1}))).free, equal);
      std::size_t k = 0;
      while (k < m && ++g[k] > 5) g[k++] = 1;
      if (k == m) break;
    }
  }
}

TEST(Torus, DualLatticePairingIsIntegral) {
  for (const auto& gamma : {ints({{1, 1, 1}}), ints({{2, 2, 4}}), ints({{1, 0, 1, 0}, {0, 1, 0, 1}}),
                            ints({{1, 1, 1}, {1, 1, 2}})}) {
    RationalVector c(gamma.rows(), Rational(1));
    const TorusSubgroup t(QuadricConfiguration(gamma, c));
    const RationalMatrix pairing = to_rational(t.lattice_basis()).transpose() * t.dual_basis();
    EXPECT_EQ(pairing, RationalMatrix::identity(gamma.rows()));
  }
}

TEST(Torus, TwoTorsionPointsAreSigns) {
  const TorusSubgroup t(QuadricConfiguration(ints({{1, 1, 1}, {1, 1, 2}}), rats({2, 3})));
  const auto pts = t.two_torsion_points();
  EXPECT_EQ(pts.size(), 4u);
  for (const auto& s : pts)
    for (int x : s) EXPECT_TRUE(x == 1 || x == -1);
  // and they agree with the numeric torus element
  const Eigen::MatrixXd dual = t.dual_basis_numeric();
  for (std::size_t mask = 0; mask < 4; ++mask) {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(2);
    for (Eigen::Index j = 0; j < 2; ++j)
      if ((mask >> j) & 1U) phi += 0.5 * dual.col(j);
    Eigen::MatrixXd g(2, 3);
    g << 1, 1, 1, 1, 1, 2;
    const Eigen::VectorXcd e = torus_element(g, phi);
    for (Eigen::Index k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(e(k) - double(pts[mask][k])), 0.0, 1e-12);
  }
}

TEST(OrbitGenerators, Examples) {
  const double tau = 2 * std::numbers::pi;
  const QuadricConfiguration q(ints({{1, 1, 1}}), rats({1}));
  Eigen::VectorXcd z(3);
  z << 1, 0, 0;
  auto g = orbit_generators(q, z);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR((g[0] - Eigen::Vector3cd(std::complex<double>(0, tau), 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(orbit_generators(q, Eigen::VectorXcd::Zero(3).eval())[0].norm(), 0.0);
  const auto s = gale_dual(square());
  Eigen::VectorXcd w(4);
  w << 1, 1, 0, 0;
  g = orbit_generators(s, w);
  ASSERT_EQ(g.size(), 2u);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4), e1 = Eigen::VectorXcd::Zero(4);
  e0(0) = {0, tau};
  e1(1) = {0, tau};
  EXPECT_NEAR((g[0] - e0).norm(), 0.0, 1e-15);
  EXPECT_NEAR((g[1] - e1).norm(), 0.0, 1e-15);
}

TEST(OrbitVolume, Examples) {
  const double tau = 2 * std::numbers::pi;
  const QuadricConfiguration q(ints({{1, 1, 1}}), rats({1}));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXcd z(3);
    for (auto& x : z) x = {gauss(rng), gauss(rng)};
    z /= z.norm();
    EXPECT_NEAR(orbit_volume(q, z), tau, 1e-12);
  }
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(orbit_volume(QuadricConfiguration(ints({{1, 1}}), rats({1})), Eigen::Vector2cd(r, r)), tau, 1e-12);
  EXPECT_THROW(orbit_volume(q, Eigen::VectorXcd::Zero(3).eval()), PreconditionError);
}

TEST(Conjugate, Examples) {
  Eigen::VectorXcd z(2);
  z << std::complex<double>(0, 1), 1;
  EXPECT_EQ(conjugate(z), Eigen::Vector2cd(std::complex<double>(0, -1), 1));
  const Eigen::VectorXcd real = Eigen::Vector3cd(1, -2, 0.5);
  EXPECT_EQ(conjugate(real), real);
}

TEST(ConjugateProperty, PreservesMembershipAndOrbitVolume) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss;
  const QuadricConfiguration q(ints({{1, 1, 1}, {1, 1, 2}}), rats({2, 3}));
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXcd z(3);
    for (auto& x : z) x = {gauss(rng), gauss(rng)};
    EXPECT_EQ(membership_residual(q, conjugate(z)), membership_residual(q, z));
    EXPECT_NEAR(orbit_volume(q, conjugate(z)), orbit_volume(q, z), 1e-12 * orbit_volume(q, z));
  }
}

TEST(HamiltonianIdentity, GeneratorsPairWithMomentMap) {
  // d mu_j (v) = omega(X_j, v) at random points and directions
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  const QuadricConfiguration q(ints({{1, 0, 1, 0}, {0, 1, 0, 1}}), rats({1, 1}));
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXcd z(4), v(4);
    for (auto& x : z) x = {gauss(rng), gauss(rng)};
    for (auto& x : v) x = {gauss(rng), gauss(rng)};
    const auto gens = orbit_generators(q, z);
    const double h = 1e-6;
    const Eigen::VectorXd dmu = (moment_map(q, z + h * v) - moment_map(q, z - h * v)) / (2 * h);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const double w = -std::numbers::inv_pi * gens[j].dot(v).imag();
      EXPECT_NEAR(dmu(static_cast<Eigen::Index>(j)), w, 1e-6 * (1 + std::abs(w)));
    }
  }
}
