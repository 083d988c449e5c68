#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hbspectra/io.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/spectral.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace hbspectra {
namespace {

RMatrix M(const std::vector<std::vector<std::string>>& rows) { return parse_matrix(rows); }

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("2/3"), Rational(2, 3));
  EXPECT_EQ(parse_rational(" 4/6 "), Rational(2, 3));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("-2.5E1"), Rational(-25));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("010/012"), Rational(5, 6));
}

TEST(MatrixCsv, QuotesLabelsContainingCommas) {
  const std::vector<std::string> labels = {"0,1;1,0", "AA|{0,1}", "say \"hi\"", "plain"};
  std::ostringstream out;
  write_matrix_csv(out, labels, RMatrix::identity(4));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), R"("0,1;1,0","AA|{0,1}","say ""hi""",plain)");
  std::istringstream in(out.str());
  const LabelledMatrix back = read_matrix_csv(in);
  EXPECT_EQ(back.labels, labels);
  EXPECT_EQ(back.matrix, RMatrix::identity(4));

  std::istringstream open_quote("\"a,b\n1,0\n0,1\n");
  EXPECT_THROW(read_matrix_csv(open_quote), ParseError);
}

TEST(Rational, RejectsGarbage) {
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational("1/2/3"), ParseError);
  EXPECT_THROW(parse_rational("0.5.1"), ParseError);
}

TEST(Rational, ApproximatesFloats) {
  EXPECT_EQ(approximate_rational(0.75), Rational(3, 4));
  EXPECT_EQ(approximate_rational(2.0), Rational(2));
  EXPECT_NEAR(approximate_rational(std::exp(1.0)).get_d(), std::exp(1.0), 1e-10);
}

TEST(StateSpace, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(StateSpace({}), ValidationError);
  EXPECT_THROW(StateSpace({"a", "a"}), ValidationError);
  StateSpace s({"x", "y"});
  EXPECT_EQ(s.index_of("y"), 1u);
  EXPECT_THROW(s.index_of("z"), ValidationError);
}

TEST(TargetDistribution, EnforcesPositivityAndNormalization) {
  auto space = StateSpace::indexed(2);
  EXPECT_NO_THROW(TargetDistribution(space, {Rational(2, 3), Rational(1, 3)}));
  EXPECT_THROW(TargetDistribution(space, {Rational(1), Rational(0)}), ValidationError);
  EXPECT_THROW(TargetDistribution(space, {Rational(1, 2), Rational(1, 3)}), ValidationError);
  EXPECT_EQ(TargetDistribution(space, {Rational(2, 3), Rational(1, 3)}).min(), Rational(1, 3));
}

TEST(CheckStochastic, Examples) {
  EXPECT_EQ(check_stochastic(M({{"1/2", "1/2"}, {"1", "0"}})), Stochasticity::stochastic);
  EXPECT_EQ(check_stochastic(M({{"1/2", "1/4"}, {"0", "1"}})), Stochasticity::substochastic);
  EXPECT_EQ(check_stochastic(M({{"1", "-1"}, {"0", "1"}})), Stochasticity::neither);
  EXPECT_EQ(check_stochastic(M({{"1", "1/2"}, {"0", "1"}})), Stochasticity::neither);
  EXPECT_THROW(check_stochastic(RMatrix(2, 3)), ValidationError);
}

TEST(CheckReversible, Examples) {
  auto space = StateSpace::indexed(2);
  TargetDistribution skew(space, {Rational(2, 3), Rational(1, 3)});
  EXPECT_TRUE(check_reversible(M({{"2/3", "1/3"}, {"2/3", "1/3"}}), skew));
  EXPECT_TRUE(check_reversible(M({{"0", "1"}, {"1", "0"}}), TargetDistribution::uniform(space)));
  EXPECT_FALSE(check_reversible(M({{"0", "1"}, {"1/2", "1/2"}}), skew));
  EXPECT_THROW(check_reversible(RMatrix::identity(3), skew), ValidationError);
}

TEST(Lazify, Examples) {
  EXPECT_EQ(lazify(M({{"0", "1"}, {"1", "0"}})), M({{"1/2", "1/2"}, {"1/2", "1/2"}}));
  EXPECT_EQ(lazify(RMatrix::identity(3)), RMatrix::identity(3));
  EXPECT_EQ(lazify(M({{"2/3", "1/3"}, {"2/3", "1/3"}})), M({{"5/6", "1/6"}, {"1/3", "2/3"}}));
}

TEST(ZeroColumns, Examples) {
  EXPECT_EQ(zero_columns(M({{"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}})), std::vector<std::size_t>{2});
  EXPECT_TRUE(zero_columns(RMatrix::identity(4)).empty());
  EXPECT_EQ(zero_columns(RMatrix(2, 2)), (std::vector<std::size_t>{0, 1}));
}

TEST(CommunicatingStructure, Examples) {
  auto full = communicating_structure(M({{"1/2", "1/2"}, {"1/2", "1/2"}}));
  EXPECT_TRUE(full.is_irreducible);
  ASSERT_EQ(full.classes.size(), 1u);

  auto ident = communicating_structure(RMatrix::identity(3));
  EXPECT_FALSE(ident.is_irreducible);
  ASSERT_EQ(ident.classes.size(), 3u);
  for (const auto& c : ident.classes) EXPECT_TRUE(c.recurrent);

  auto chain = communicating_structure(M({{"0", "1", "0"}, {"0", "0", "1"}, {"0", "0", "1"}}));
  ASSERT_EQ(chain.classes.size(), 3u);
  EXPECT_EQ(chain.classes[0].states, std::vector<std::size_t>{0});
  EXPECT_FALSE(chain.classes[0].recurrent);
  EXPECT_FALSE(chain.classes[1].recurrent);
  EXPECT_TRUE(chain.classes[2].recurrent);
}

TEST(CommunicatingStructure, CycleIsOneClass) {
  RMatrix m(5, 5);
  for (std::size_t i = 0; i < 5; ++i) m(i, (i + 1) % 5) = 1;
  auto s = communicating_structure(m);
  EXPECT_TRUE(s.is_irreducible);
  EXPECT_TRUE(s.classes.front().recurrent);
}

TEST(Rank, AgreesWithGaussianElimination) {
  gen::Engine rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = gen::uniform(rng, 1, 7), c = gen::uniform(rng, 1, 7);
    RMatrix m(r, c);
    // Sparse entries and duplicated rows make rank deficiency common.
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (gen::uniform(rng, 0, 2) == 0) m(i, j) = Rational(static_cast<long>(gen::uniform(rng, 0, 6)) - 3, static_cast<long>(gen::uniform(rng, 1, 4)));
    if (r > 1 && gen::uniform(rng, 0, 1))
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = Rational(1, 3) * m(0, j);
    EXPECT_EQ(rank(m), oracle::gauss_rank(m));
  }
}

TEST(Properties, RowSumsExactAndFloatMirror) {
  gen::Engine rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = gen::si_matrix(rng);
    StochasticMatrix sm(inst.matrix);
    DMatrix d = sm.to_double();
    for (std::size_t i = 0; i < d.rows(); ++i) {
      double s = 0;
      for (double v : d.row(i)) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(Properties, ReversibleImpliesStationary) {
  gen::Engine rng(5);
  int verdicts = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen::uniform(rng, 1, 6);
    TargetDistribution pi(StateSpace::indexed(n), gen::distribution(rng, n));
    // Metropolis-style reversible construction, or an arbitrary row-stochastic matrix.
    RMatrix m(n, n);
    if (trial % 2 == 0) {
      for (std::size_t x = 0; x < n; ++x) {
        Rational off = 0;
        for (std::size_t y = 0; y < n; ++y) {
          if (y == x) continue;
          const Rational ratio = pi[y] / pi[x];
          m(x, y) = Rational(1, n) * (ratio < 1 ? ratio : Rational(1));
          off += m(x, y);
        }
        m(x, x) = 1 - off;
      }
    } else {
      for (std::size_t x = 0; x < n; ++x) {
        auto row = gen::nonnegative_distribution(rng, n);
        for (std::size_t y = 0; y < n; ++y) m(x, y) = row[y];
      }
    }
    if (check_reversible(m, pi)) {
      ++verdicts;
      EXPECT_TRUE(is_stationary(m, pi));
    }
  }
  EXPECT_GT(verdicts, 100);
}

TEST(Properties, ZeroColumnsPermutationInvariant) {
  gen::Engine rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = gen::si_matrix(rng);
    const auto perm = gen::permutation(rng, inst.matrix.rows());
    const RMatrix permuted = permute(inst.matrix, perm);
    std::vector<std::size_t> mapped;
    for (std::size_t j : zero_columns(permuted)) mapped.push_back(perm[j]);
    std::sort(mapped.begin(), mapped.end());
    EXPECT_EQ(mapped, zero_columns(inst.matrix));
  }
}

TEST(Properties, LazifiedReversibleChainsAreNonnegative) {
  gen::Engine rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::uniform(rng, 2, 7);
    TargetDistribution pi(StateSpace::indexed(n), gen::distribution(rng, n));
    RMatrix m(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      Rational off = 0;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const Rational ratio = pi[y] / pi[x];
        m(x, y) = Rational(1, n - 1) * (ratio < 1 ? ratio : Rational(1));
        off += m(x, y);
      }
      m(x, x) = 1 - off;
    }
    const auto lazy = certify_psd(lazify(m), pi);
    EXPECT_GE(lazy.lambda_min, -1e-12);
    if (lazy.lambda_1) {
      EXPECT_DOUBLE_EQ(lazy.lambda_star, *lazy.lambda_1);
    }
  }
}

TEST(StationaryDistribution, Examples) {
  EXPECT_EQ(stationary_distribution(M({{"2/3", "1/3"}, {"2/3", "1/3"}})), (std::vector<Rational>{Rational(2, 3), Rational(1, 3)}));
  EXPECT_EQ(stationary_distribution(M({{"0", "1"}, {"1", "0"}})), (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(stationary_distribution(M({{"0", "1", "0"}, {"0", "0", "1"}, {"1", "0", "0"}})),
            (std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
  EXPECT_FALSE(stationary_distribution(RMatrix::identity(2)).has_value());
}

TEST(Properties, StationaryDistributionOfIrreducibleChains) {
  gen::Engine rng(17);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen::uniform(rng, 1, 7);
    RMatrix m(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      auto row = gen::nonnegative_distribution(rng, n);
      for (std::size_t y = 0; y < n; ++y) m(x, y) = row[y];
    }
    const auto pi = stationary_distribution(m);
    EXPECT_EQ(pi.has_value(), communicating_structure(m).is_irreducible);
    if (!pi) continue;
    ++solved;
    Rational total = 0;
    for (std::size_t y = 0; y < n; ++y) {
      Rational flow = 0;
      for (std::size_t x = 0; x < n; ++x) flow += (*pi)[x] * m(x, y);
      EXPECT_EQ(flow, (*pi)[y]);
      EXPECT_GT((*pi)[y], 0);
      total += (*pi)[y];
    }
    EXPECT_EQ(total, 1);
  }
  EXPECT_GT(solved, 30);
}

TEST(MatrixCsv, ReadsFractionsAndDecimals) {
  std::istringstream in("a,b\n1/2,0.5\n1,0\n");
  auto lm = read_matrix_csv(in);
  EXPECT_EQ(lm.labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(lm.matrix, M({{"1/2", "1/2"}, {"1", "0"}}));

  std::ostringstream out;
  write_matrix_csv(out, lm.labels, lm.matrix);
  EXPECT_EQ(out.str(), "a,b\n1/2,1/2\n1,0\n");
}

TEST(MatrixCsv, RejectsRaggedRows) {
  std::istringstream in("a,b\n1/2\n");
  EXPECT_THROW(read_matrix_csv(in), ParseError);
}

}  // namespace
}  // namespace hbspectra
