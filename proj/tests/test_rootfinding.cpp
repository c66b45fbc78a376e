#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "schoenberg/rootfinding.hpp"

using namespace schoenberg;
using oracle::C;

namespace {

const C I(0, 1);

RootConfiguration cfg(std::vector<Complex> z) { return RootConfiguration(std::move(z)); }

Polynomial<double> poly(std::vector<Complex> c) { return Polynomial<double>(std::move(c)); }

}  // namespace

TEST(FindRoots, Linear) {
  const auto r = find_roots(poly({0.0, 2.0}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], C(0.0));
}

TEST(FindRoots, QuadraticAgainstFormula) {
  const auto r = find_roots(poly({11.0, -12.0, 3.0}));
  const auto [r1, r2] = oracle::quadratic(3.0, -12.0, 11.0);
  EXPECT_LE(match_multisets(r, std::vector<C>{r1, r2}), 1e-12);
  EXPECT_LE(match_multisets(r, std::vector<C>{2 + 1 / std::sqrt(3.0), 2 - 1 / std::sqrt(3.0)}), 1e-12);
}

TEST(FindRoots, TripleRootAtOrigin) {
  const auto r = find_roots(poly({0.0, 0.0, 0.0, 4.0}));
  ASSERT_EQ(r.size(), 3u);
  for (const auto& x : r) EXPECT_LE(std::abs(x), 1e-12);
}

TEST(FindRoots, RejectsConstants) {
  EXPECT_THROW(find_roots(poly({3.0})), InvalidInput);
  EXPECT_THROW(find_roots(Polynomial<double>()), InvalidInput);
}

TEST(FindRoots, InvalidSettingsRejected) {
  RootSolverSettings s;
  s.tol_root = 0;
  EXPECT_THROW(find_roots(poly({1.0, 1.0, 1.0}), s), InvalidInput);
  s = {};
  s.max_iterations = 0;
  EXPECT_THROW(find_roots(poly({1.0, 1.0, 1.0}), s), InvalidInput);
}

TEST(FindRoots, IterationCapRaisesConvergenceError) {
  RootSolverSettings s;
  s.max_iterations = 1;
  std::mt19937_64 g(2);
  const auto p = from_roots(cfg(oracle::disk(g, 12)));
  try {
    (void)find_roots(p, s);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), 12u);
    EXPECT_GT(e.residual(), s.tol_root);
  }
}

TEST(FindRoots, ResidualBound) {
  std::mt19937_64 g(17);
  const RootSolverSettings s;
  for (int t = 0; t < 300; ++t) {
    const auto p = from_roots(cfg(oracle::disk(g, 2 + t % 15)));
    for (const auto& r : find_roots(p, s)) EXPECT_LE(std::abs(p(r)), s.tol_root * p.residual_scale(r));
  }
}

TEST(FindRoots, AgreesWithWeierstrassOracle) {
  std::mt19937_64 g(23);
  for (int t = 0; t < 100; ++t) {
    const auto z = oracle::disk(g, 2 + t % 7);
    const auto want = oracle::weierstrass_roots(oracle::differentiate(oracle::expand(z)));
    EXPECT_LE(match_multisets(critical_points(cfg(z)).points, want), 1e-8);
  }
}

TEST(FindRoots, DeterministicForSeed) {
  std::mt19937_64 g(29);
  const auto p = from_roots(cfg(oracle::disk(g, 9)));
  EXPECT_EQ(find_roots(p), find_roots(p));
}

TEST(CriticalPoints, Examples) {
  EXPECT_LE(match_multisets(critical_points(cfg({1.0, -1.0})).points, std::vector<C>{0.0}), 1e-14);
  EXPECT_LE(match_multisets(critical_points(cfg({1.0, 2.0, 3.0})).points,
                            std::vector<C>{2 + 1 / std::sqrt(3.0), 2 - 1 / std::sqrt(3.0)}),
            1e-12);
  EXPECT_LE(match_multisets(critical_points(cfg({1.0, I, -1.0, -I})).points, std::vector<C>{0.0, 0.0, 0.0}), 1e-12);
}

TEST(CriticalPoints, DoubleRootCollapses) {
  // p = (z-1)^3, p' = 3(z-1)^2.
  const auto w = critical_points(cfg({1.0, 1.0, 1.0})).points;
  for (const auto& x : w) EXPECT_LE(std::abs(x - 1.0), 1e-12);
}

TEST(CriticalPoints, NearlyRepeatedZeros) {
  for (double gap : {0.0, 1e-16, 1e-14, 1e-12, 1e-9, 1e-6}) {
    std::vector<C> z{0.03, 1.0, 1.0 + gap, std::polar(1.0 + 2 * gap, gap), -0.5 * I};
    const auto w = critical_points(cfg(z)).points;
    const auto p = derivative(from_roots(cfg(z)));
    ASSERT_EQ(w.size(), 4u);
    for (const auto& x : w) EXPECT_LE(std::abs(p(x)), 1e-9 * p.residual_scale(x)) << "gap=" << gap;
    const auto xi = moduli_critical_points(cfg(z));
    EXPECT_NEAR(xi[0], 1.0, 1e-5) << "gap=" << gap;
  }
}

TEST(CriticalPoints, CountIsNMinusOne) {
  std::mt19937_64 g(31);
  for (std::size_t n = 2; n <= 14; ++n) EXPECT_EQ(critical_points(cfg(oracle::disk(g, n))).size(), n - 1);
}

TEST(CriticalPoints, InsideConvexHull) {
  std::mt19937_64 g(37);
  for (int t = 0; t < 300; ++t) {
    const auto z = t % 3 == 0 ? oracle::line(g, 2 + t % 10) : oracle::disk(g, 2 + t % 12);
    for (const auto& w : critical_points(cfg(z))) EXPECT_LE(oracle::hull_distance(w, z), 1e-8);
  }
}

TEST(CriticalPoints, CoefficientIdentity) {
  std::mt19937_64 g(41);
  for (int t = 0; t < 300; ++t) {
    const auto z = oracle::disk(g, 2 + t % 11);
    const auto w = critical_points(cfg(z)).points;
    const double n = static_cast<double>(z.size());
    for (std::size_t k = 1; k < z.size(); ++k) {
      const C want = (n - k) / n * oracle::esym_subsets(z, k);
      std::vector<double> mods;
      for (const auto& x : z) mods.push_back(std::abs(x));
      const double scale = (n - k) / n * oracle::esym_subsets(mods, k);
      EXPECT_LE(std::abs(elementary_symmetric(w, k) - want), 1e-8 * std::max(scale, 1e-300)) << "k=" << k;
    }
  }
}

TEST(CriticalPoints, CentroidIdentity) {
  std::mt19937_64 g(43);
  for (int t = 0; t < 300; ++t) {
    const auto z = normalize_modulus(cfg(oracle::disk(g, 2 + t % 11)));
    const auto w = critical_points(z).points;
    C mw(0);
    for (const auto& x : w) mw += x;
    mw /= static_cast<double>(w.size());
    EXPECT_LE(std::abs(mw - centroid(z)), 1e-10);
  }
}

TEST(ModuliCriticalPoints, Examples) {
  const auto a = moduli_critical_points(cfg({1.0, -1.0}));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NEAR(a[0], 1.0, 1e-12);
  for (double x : moduli_critical_points(cfg({1.0, I, -1.0, -I}))) EXPECT_NEAR(x, 1.0, 1e-12);
  const auto c = moduli_critical_points(cfg({0.0, 0.0, 3.0}));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0], 2.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
}

TEST(ModuliCriticalPoints, SortedNonnegative) {
  std::mt19937_64 g(47);
  for (int t = 0; t < 200; ++t) {
    const auto xi = moduli_critical_points(cfg(oracle::disk(g, 2 + t % 11)));
    for (std::size_t i = 0; i < xi.size(); ++i) {
      EXPECT_GE(xi[i], 0.0);
      if (i) EXPECT_GE(xi[i - 1], xi[i]);
    }
  }
}

TEST(ModuliCriticalPoints, AgreesWithOracle) {
  std::mt19937_64 g(53);
  for (int t = 0; t < 100; ++t) {
    const auto z = oracle::disk(g, 2 + t % 7);
    std::vector<C> mods;
    for (const auto& x : z) mods.emplace_back(std::abs(x));
    const auto want = oracle::weierstrass_roots(oracle::differentiate(oracle::expand(mods)));
    const auto got = moduli_critical_points(cfg(z));
    std::vector<C> gotc(got.begin(), got.end());
    EXPECT_LE(match_multisets(gotc, want), 1e-8);
  }
}

TEST(MatchMultisets, Examples) {
  EXPECT_EQ(match_multisets(std::vector<C>{0.0, 1.0}, std::vector<C>{1.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(match_multisets(std::vector<C>{0.0}, std::vector<C>{1e-12}), 1e-12);
  EXPECT_EQ(match_multisets(std::vector<C>{1.0 + I, 2.0}, std::vector<C>{2.0, 1.0 + I}), 0.0);
}

TEST(MatchMultisets, LengthMismatchRejected) {
  EXPECT_THROW(match_multisets(std::vector<C>{0.0}, std::vector<C>{0.0, 1.0}), InvalidInput);
}

TEST(MatchMultisets, WellSeparatedAgreesWithOptimal) {
  std::mt19937_64 g(59);
  std::normal_distribution<double> noise(0, 1e-9);
  for (int t = 0; t < 100; ++t) {
    const auto a = oracle::disk(g, 2 + t % 6);
    auto b = a;
    for (auto& x : b) x += C(noise(g), noise(g));
    std::shuffle(b.begin(), b.end(), g);
    EXPECT_NEAR(match_multisets(a, b), oracle::best_matching(a, b), 1e-15);
  }
}

TEST(RootClusters, GroupsUnresolvedApproximations) {
  // (z-1)^2 (z-5) with a double root blurred by round-off.
  const auto p = from_roots(cfg({1.0, 1.0, 5.0}));
  const std::vector<C> approx{1.0 + 1e-8, 1.0 - 1e-8 * I, 5.0};
  const auto groups = root_clusters(p, std::span<const C>(approx));
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].size(), 2u);
  EXPECT_EQ(groups[1].size(), 1u);
}

TEST(RootClusters, CloseButResolvedRootsStaySeparate) {
  std::vector<C> z;
  for (int k = 0; k < 12; ++k) z.emplace_back(0.3 + 0.05 * k);
  const auto p = from_roots(cfg(z));
  EXPECT_EQ(root_clusters(p, std::span<const C>(z)).size(), 12u);
  const auto r = find_roots(p);
  // Rounding the expanded coefficients alone moves these roots by ~1e-6.
  EXPECT_LE(match_multisets(r, z), 1e-5);
}
