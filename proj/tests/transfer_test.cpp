#include <gtest/gtest.h>

#include "hbspectra/heatbath.hpp"
#include "hbspectra/models.hpp"
#include "hbspectra/transfer.hpp"
#include "support/generators.hpp"

namespace hbspectra {
namespace {

RMatrix M(const std::vector<std::vector<std::string>>& rows) { return parse_matrix(rows); }

TargetDistribution uniform(std::size_t n) { return TargetDistribution::uniform(StateSpace::indexed(n)); }

TEST(Adjoint, IdentityLift) {
  EXPECT_EQ(adjoint(RMatrix::identity(3), uniform(3), uniform(3)), RMatrix::identity(3));
}

TEST(Adjoint, ForgetfulLiftReturnsPi) {
  TargetDistribution pi(StateSpace::indexed(2), {Rational(1, 4), Rational(3, 4)});
  TargetDistribution mu(StateSpace::indexed(3), {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
  RMatrix r(2, 3);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y) r(x, y) = mu[y];
  const RMatrix back = adjoint(r, pi, mu);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 2; ++x) EXPECT_EQ(back(y, x), pi[x]);
}

TEST(Adjoint, SwendsenWangReturnsToTheUnderlyingConfiguration) {
  const auto sw = build_swendsen_wang(Graph::path(2), 2, Rational(2));
  const RMatrix back = adjoint(sw.R, sw.pi, sw.mu);
  for (std::size_t j = 0; j < sw.lifted.size(); ++j)
    for (std::size_t x = 0; x < sw.pi.size(); ++x) EXPECT_EQ(back(j, x), x == sw.lifted[j].config ? 1 : 0);
}

TEST(Adjoint, RejectsInconsistentPushForward) {
  EXPECT_THROW(adjoint(M({{"1", "0"}, {"1", "0"}}), uniform(2), uniform(2)), ValidationError);
}

TEST(VerifyTransferConditions, SwendsenWangPasses) {
  const auto sw = build_swendsen_wang(Graph::path(3), 2, Rational(3));
  const auto report = verify_transfer_conditions(sw.R, sw.T, sw.pi, sw.mu);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.checks.size(), 6u);
  EXPECT_EQ(report.psd_method, "exact-idempotent");
}

TEST(VerifyTransferConditions, SwapInnerChainFailsOnlyPsd) {
  const auto report = verify_transfer_conditions(RMatrix::identity(2), M({{"0", "1"}, {"1", "0"}}), uniform(2), uniform(2));
  EXPECT_EQ(report.failures(), std::vector<std::string>{"T_psd"});
  EXPECT_EQ(report.psd_method, "numeric");
}

TEST(VerifyTransferConditions, RowSumFailureIsIsolated) {
  const RMatrix r = M({{"1/2", "0"}, {"1/2", "1"}});
  const auto report = verify_transfer_conditions(r, RMatrix::identity(2), uniform(2), uniform(2));
  EXPECT_EQ(report.failures(), std::vector<std::string>{"R_rows_sum_to_one"});
  EXPECT_TRUE(report.passed("pi_R_equals_mu"));
}

TEST(VerifyTransferConditions, OtherFailures) {
  const auto neg = verify_transfer_conditions(M({{"3/2", "-1/2"}, {"-1/2", "3/2"}}), RMatrix::identity(2), uniform(2), uniform(2));
  EXPECT_EQ(neg.failures(), std::vector<std::string>{"R_nonnegative"});

  TargetDistribution skew(StateSpace::indexed(2), {Rational(2, 3), Rational(1, 3)});
  const auto irr = verify_transfer_conditions(RMatrix::identity(2), M({{"1/2", "1/2"}, {"1/2", "1/2"}}), skew, skew);
  EXPECT_EQ(irr.failures(), (std::vector<std::string>{"T_reversible", "T_psd"}));
  EXPECT_EQ(irr.psd_method, "not-evaluated");
}

TEST(ComposeTransfer, Examples) {
  const RMatrix t = M({{"1/2", "1/2"}, {"1/2", "1/2"}});
  EXPECT_EQ(compose_transfer(RMatrix::identity(2), t, uniform(2), uniform(2)).matrix(), t);
  EXPECT_THROW(compose_transfer(RMatrix::identity(2), M({{"0", "1"}, {"1", "0"}}), uniform(2), uniform(2)), ValidationError);
}

// Random lifted triples: a joint nonnegative matrix J gives pi (row sums),
// mu (column sums) and R = J / pi; T is a heat-bath chain on the lifted space.
TEST(Properties, RandomTriplesComposeToPsdReversibleChains) {
  gen::Engine rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = gen::uniform(rng, 1, 5), m = gen::uniform(rng, 1, 7);
    RMatrix joint(n, m);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < m; ++y) joint(x, y) = Rational(static_cast<long>(gen::uniform(rng, 0, 3)));
    for (std::size_t x = 0; x < n; ++x) joint(x, gen::uniform(rng, 0, m - 1)) += 1;
    for (std::size_t y = 0; y < m; ++y) joint(gen::uniform(rng, 0, n - 1), y) += 1;
    Rational total = 0;
    for (std::size_t x = 0; x < n; ++x)
      for (const auto& v : joint.row(x)) total += v;
    std::vector<Rational> pi_w(n), mu_w(m);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        pi_w[x] += joint(x, y) / total;
        mu_w[y] += joint(x, y) / total;
      }
    TargetDistribution pi(StateSpace::indexed(n), pi_w), mu(StateSpace::indexed(m), mu_w);
    RMatrix r(n, m);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < m; ++y) r(x, y) = joint(x, y) / total / pi[x];

    HeatBathSpec inner = gen::heat_bath_spec(rng, 1, 3);
    inner.states.clear();
    for (std::size_t y = 0; y < m; ++y) inner.states.push_back("s" + std::to_string(y));
    inner.pi = mu.probs();
    for (auto& label : inner.labels) label.blocks = gen::partition(rng, m, m);
    const RMatrix t = build_chain(inner).matrix();

    ASSERT_TRUE(verify_transfer_conditions(r, t, pi, mu).ok());
    const StochasticMatrix p = compose_transfer(r, t, pi, mu);

    // Entrywise sum_{y,z} R(x,y) T(y,z) pi(w) R(w,z) / mu(z).
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t w = 0; w < n; ++w) {
        Rational want = 0;
        for (std::size_t y = 0; y < m; ++y)
          for (std::size_t z = 0; z < m; ++z) want += r(x, y) * t(y, z) * pi[w] * r(w, z) / mu[z];
        EXPECT_EQ(p(x, w), want);
      }
    EXPECT_TRUE(certify_psd(p, pi).psd);
  }
}

}  // namespace
}  // namespace hbspectra
