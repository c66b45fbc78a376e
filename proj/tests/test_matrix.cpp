#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "schoenberg/matrix.hpp"

using namespace schoenberg;
using oracle::C;

namespace {

const C I(0, 1);

RootConfiguration cfg(std::vector<Complex> z) { return RootConfiguration(std::move(z)); }

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs_entry(); }

}  // namespace

TEST(BuildS, Examples) {
  EXPECT_EQ(build_S(2), (ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}));
  EXPECT_EQ(build_S(1), (ComplexMatrix{{0.0}}));
  const auto s3 = build_S(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(s3(i, j) - (i == j ? 2.0 / 3 : -1.0 / 3)), 0, 1e-15);
  EXPECT_THROW(build_S(0), InvalidInput);
}

TEST(BuildS, IsProjection) {
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto s = build_S(n);
    EXPECT_LE(max_diff(s * s, s), 1e-14) << "n=" << n;
  }
}

TEST(BuildD, Examples) {
  EXPECT_EQ(build_D(cfg({1.0, -1.0})), (ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}));
  EXPECT_EQ(build_D(cfg({0.0, 0.0})), ComplexMatrix(2));
  EXPECT_EQ(build_D(cfg({1.0, I})), (ComplexMatrix{{1.0, 0.0}, {0.0, I}}));
}

TEST(TraceWord, Examples) {
  EXPECT_EQ(trace_word(std::vector<ComplexMatrix>{ComplexMatrix::identity(3)}), C(3.0));
  const ComplexMatrix d{{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_EQ(trace_word(std::vector<ComplexMatrix>{d, d}), C(2.0));
  EXPECT_NEAR(std::abs(trace_word(std::vector<ComplexMatrix>{build_S(2), build_S(2)}) - 1.0), 0, 1e-15);
}

TEST(TraceWord, InvalidWords) {
  EXPECT_THROW(trace_word(std::vector<ComplexMatrix>{}), InvalidInput);
  EXPECT_THROW(trace_word(std::vector<ComplexMatrix>{build_S(2), build_S(3)}), InvalidInput);
}

TEST(TraceWord, MatchesNestedVectorOracle) {
  std::mt19937_64 g(61);
  for (int t = 0; t < 50; ++t) {
    const auto z = oracle::centered_unit(g, 2 + t % 9);
    const auto c = cfg(z);
    const auto s = build_S(z.size());
    const auto d = build_D(c);
    std::vector<ComplexMatrix> word;
    for (int i = 0; i < 3; ++i) word.insert(word.end(), {s, d.adjoint(), s, d});
    EXPECT_NEAR(trace_word(word).real(), oracle::star_trace(z), 1e-12);
  }
}

TEST(CharPoly, Examples) {
  const auto a = char_poly(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}});
  EXPECT_EQ(a, Polynomial<double>({-1.0, 0.0, 1.0}));
  EXPECT_EQ(char_poly(ComplexMatrix(2)), Polynomial<double>({0.0, 0.0, 1.0}));
  const auto c = char_poly(ComplexMatrix{{0.5, -0.5}, {0.5, -0.5}});
  EXPECT_NEAR(std::abs(c[0]), 0, 1e-15);
  EXPECT_NEAR(std::abs(c[1]), 0, 1e-15);
  EXPECT_EQ(c[2], C(1.0));
}

TEST(CharPoly, MatchesProductOfDiagonalFactors) {
  std::mt19937_64 g(67);
  const auto z = oracle::disk(g, 8);
  const auto p = char_poly(build_D(cfg(z)));
  const auto want = oracle::expand(z);
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_LE(std::abs(p[k] - want[k]), 1e-12);
}

TEST(CharPoly, SizeLimit) {
  EXPECT_THROW(char_poly(ComplexMatrix(max_char_poly_order + 1)), UnsupportedSize);
  EXPECT_NO_THROW(char_poly(ComplexMatrix::identity(max_char_poly_order)));
}

TEST(SpectrumEquivalence, Examples) {
  EXPECT_LE(verify_lemma1(cfg({1.0, -1.0})).max_pair_distance, 1e-12);
  EXPECT_LE(verify_lemma1(cfg({1.0, I, -1.0, -I})).max_pair_distance, 1e-9);
  const auto r = verify_lemma1(cfg({1.0, 2.0, 3.0}));
  EXPECT_LE(r.max_pair_distance, 1e-8);
  EXPECT_LE(match_multisets(r.expected, std::vector<C>{0.0, 2 + 1 / std::sqrt(3.0), 2 - 1 / std::sqrt(3.0)}), 1e-12);
}

TEST(SpectrumEquivalence, RandomConfigurations) {
  std::mt19937_64 g(71);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int t = 0; t < 60; ++t) {
      const auto c = normalize_modulus(cfg(oracle::disk(g, n)));
      EXPECT_LE(verify_lemma1(c).max_pair_distance, 1e-7) << "n=" << n;
    }
  }
}

TEST(SpectrumEquivalence, CompressedMatrixHasSameSpectrum) {
  std::mt19937_64 g(73);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto c = normalize_modulus(cfg(oracle::disk(g, n)));
      const auto ev = find_roots(char_poly(compress_D(c)));
      auto want = critical_points(c).points;
      want.insert(want.begin(), 0.0);
      EXPECT_LE(match_multisets(ev, want), 1e-7) << "n=" << n;
    }
  }
}

TEST(JDJ, VanishesForCenteredConfigurations) {
  std::mt19937_64 g(79);
  for (int t = 0; t < 100; ++t) {
    const auto c = recenter(cfg(oracle::disk(g, 2 + t % 11)));
    const auto j = build_J(c.size());
    EXPECT_LE((j * build_D(c) * j).max_abs_entry(), 1e-12 * c.scale());
  }
}

TEST(IsNormal, Examples) {
  std::mt19937_64 g(83);
  EXPECT_TRUE(is_normal(build_D(cfg(oracle::disk(g, 6))), 1e-10));
  EXPECT_TRUE(is_normal(compress_D(cfg({1.0, 0.0, -1.0})), 1e-10));
  EXPECT_FALSE(is_normal(compress_D(cfg({1.0, I, -1.0 - I})), 1e-10));
}

TEST(IsNormal, CollinearIffNormal) {
  std::mt19937_64 g(89);
  for (int t = 0; t < 200; ++t) {
    const auto line = cfg(oracle::line(g, 3 + t % 8));
    EXPECT_TRUE(is_normal(compress_D(line), 1e-10));
    EXPECT_TRUE(are_collinear(line));
    const auto generic = cfg(oracle::disk(g, 3 + t % 8));
    EXPECT_FALSE(is_normal(compress_D(generic), 1e-10));
    EXPECT_FALSE(are_collinear(generic));
  }
}

TEST(AreCollinear, Degenerate) {
  EXPECT_TRUE(are_collinear(cfg({1.0, 1.0})));
  EXPECT_TRUE(are_collinear(cfg({I, I, 3.0 + I})));
  EXPECT_FALSE(are_collinear(cfg({0.0, 1.0, I})));
}
