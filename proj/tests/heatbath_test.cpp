#include <gtest/gtest.h>

#include <set>

#include "hbspectra/heatbath.hpp"
#include "hbspectra/io.hpp"
#include "support/generators.hpp"

namespace hbspectra {
namespace {

RMatrix M(const std::vector<std::vector<std::string>>& rows) { return parse_matrix(rows); }

HeatBathSpec three_state(std::vector<std::vector<std::size_t>> blocks) {
  HeatBathSpec spec;
  spec.states = {"x", "y", "z"};
  spec.pi = {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  spec.labels.push_back({"a", Rational(1), std::move(blocks)});
  return spec;
}

HeatBathSpec two_label_example() {
  HeatBathSpec spec = three_state({{0, 1}, {2}});
  spec.labels[0].rho = Rational(1, 2);
  spec.labels.push_back({"b", Rational(1, 2), {{0}, {1, 2}}});
  return spec;
}

TEST(ValidateSpec, AcceptsPartition) { EXPECT_TRUE(validate_spec(three_state({{0, 1}, {2}})).ok()); }

TEST(ValidateSpec, ReportsOverlapWithWitness) {
  const auto report = validate_spec(three_state({{0, 1}, {1, 2}}));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].axiom, "(II)");
  EXPECT_EQ(report.violations[0].message, "overlapping blocks, witness state 1");
  EXPECT_EQ(report.violations[0].witness, std::optional<std::size_t>(1));
}

TEST(ValidateSpec, ReportsUncoveredState) {
  const auto report = validate_spec(three_state({{0}, {2}}));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].message, "state 1 uncovered");
  EXPECT_EQ(report.violations[0].witness, std::optional<std::size_t>(1));
}

TEST(ValidateSpec, ReportsMalformedData) {
  HeatBathSpec spec = three_state({{0, 1, 7}, {2}});
  spec.pi[0] = 0;
  spec.labels[0].rho = Rational(1, 2);
  const auto report = validate_spec(spec);
  std::set<std::string> axioms;
  for (const auto& v : report.violations) axioms.insert(v.axiom);
  EXPECT_EQ(axioms, (std::set<std::string>{"pi", "rho", "(II)"}));

  HeatBathSpec no_labels = three_state({{0, 1, 2}});
  no_labels.labels.clear();
  EXPECT_FALSE(validate_spec(no_labels).ok());
  EXPECT_THROW(build_chain(no_labels), ValidationError);
}

TEST(BuildLabelKernel, Examples) {
  EXPECT_EQ(build_label_kernel(three_state({{0, 1}, {2}}), "a").matrix.matrix(),
            M({{"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}, {"0", "0", "1"}}));
  EXPECT_EQ(build_label_kernel(three_state({{0}, {1}, {2}}), "a").matrix.matrix(), RMatrix::identity(3));

  HeatBathSpec skew;
  skew.states = {"0", "1"};
  skew.pi = {Rational(2, 3), Rational(1, 3)};
  skew.labels.push_back({"a", Rational(1), {{0, 1}}});
  EXPECT_EQ(build_label_kernel(skew, "a").matrix.matrix(), M({{"2/3", "1/3"}, {"2/3", "1/3"}}));
  EXPECT_THROW(build_label_kernel(skew, "nope"), ValidationError);
}

TEST(BuildChain, TwoLabelExample) {
  EXPECT_EQ(build_chain(two_label_example()).matrix(),
            M({{"3/4", "1/4", "0"}, {"1/4", "1/2", "1/4"}, {"0", "1/4", "3/4"}}));
}

TEST(BuildChain, SingleBlockAndSingletons) {
  HeatBathSpec one;
  one.states = {"0", "1", "2"};
  one.pi = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  one.labels.push_back({"a", Rational(1), {{0, 1, 2}}});
  const auto p = build_chain(one);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(p(x, y), one.pi[y]);

  HeatBathSpec ids = one;
  ids.labels = {{"a", Rational(1, 3), {{0}, {1}, {2}}}, {"b", Rational(2, 3), {{2}, {0}, {1}}}};
  EXPECT_EQ(build_chain(ids).matrix(), RMatrix::identity(3));
}

TEST(ReconstructSpec, Examples) {
  const TargetDistribution uniform3 = TargetDistribution::uniform(StateSpace::indexed(3));
  std::vector<WeightedKernel> k1{{M({{"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}, {"0", "0", "1"}}), Rational(1)}};
  const auto spec = reconstruct_spec(k1, uniform3);
  ASSERT_EQ(spec.labels.size(), 1u);
  EXPECT_EQ(spec.labels[0].id, "k0");
  EXPECT_EQ(spec.labels[0].blocks, (std::vector<std::vector<std::size_t>>{{0, 1}, {2}}));

  std::vector<WeightedKernel> k2{{RMatrix::identity(3), Rational(1)}};
  EXPECT_EQ(reconstruct_spec(k2, uniform3).labels[0].blocks, (std::vector<std::vector<std::size_t>>{{0}, {1}, {2}}));

  TargetDistribution skew(StateSpace::indexed(2), {Rational(2, 3), Rational(1, 3)});
  std::vector<WeightedKernel> k3{{M({{"2/3", "1/3"}, {"2/3", "1/3"}}), Rational(1)}};
  EXPECT_EQ(reconstruct_spec(k3, skew).labels[0].blocks, (std::vector<std::vector<std::size_t>>{{0, 1}}));
}

TEST(ReconstructSpec, ReportsEachFailureSeparately) {
  const TargetDistribution uniform3 = TargetDistribution::uniform(StateSpace::indexed(3));
  auto message = [&](RMatrix m) {
    std::vector<WeightedKernel> k{{std::move(m), Rational(1)}};
    try {
      reconstruct_spec(k, uniform3);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(M({{"0", "1", "0"}, {"1", "0", "0"}, {"0", "0", "1"}})).find("is not SI"), std::string::npos);
  EXPECT_NE(message(M({{"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}})).find("zero column"), std::string::npos);
  EXPECT_NE(message(M({{"1/3", "2/3", "0"}, {"1/3", "2/3", "0"}, {"0", "0", "1"}})).find("not reversible"), std::string::npos);
}

// Properties over random specs.

std::set<std::set<std::size_t>> as_sets(const std::vector<std::vector<std::size_t>>& blocks) {
  std::set<std::set<std::size_t>> out;
  for (const auto& b : blocks) out.emplace(b.begin(), b.end());
  return out;
}

TEST(Properties, KernelsAndChains) {
  gen::Engine rng(314);
  for (int trial = 0; trial < 300; ++trial) {
    const HeatBathSpec spec = gen::heat_bath_spec(rng);
    ASSERT_TRUE(validate_spec(spec).ok());
    const TargetDistribution pi = spec.target();
    std::vector<WeightedKernel> kernels;
    for (const auto& label : spec.labels) {
      const RMatrix pa = build_label_kernel(spec, label.id).matrix.matrix();
      EXPECT_EQ(pa * pa, pa);
      EXPECT_TRUE(check_reversible(pa, pi));
      kernels.push_back({pa, label.rho});
      // States sharing a block have identical rows.
      for (const auto& block : label.blocks)
        for (std::size_t x : block)
          for (std::size_t y : block)
            for (std::size_t z = 0; z < pa.cols(); ++z) EXPECT_EQ(pa(x, z), pa(y, z));
    }
    const StochasticMatrix p = build_chain(spec);
    for (std::size_t x = 0; x < p.size(); ++x) EXPECT_GT(p(x, x), 0);
    EXPECT_TRUE(check_reversible(p, pi));

    const HeatBathSpec back = reconstruct_spec(kernels, pi);
    ASSERT_EQ(back.labels.size(), spec.labels.size());
    for (std::size_t a = 0; a < spec.labels.size(); ++a)
      EXPECT_EQ(as_sets(back.labels[a].blocks), as_sets(spec.labels[a].blocks));
    EXPECT_EQ(build_chain(back).matrix(), p.matrix());
  }
}

TEST(SpecJson, RoundTripAndLayout) {
  const HeatBathSpec spec = two_label_example();
  const Json j = spec_to_json(spec);
  EXPECT_EQ(j.dump(),
            R"({"states":["x","y","z"],"pi":["1/3","1/3","1/3"],"labels":[{"id":"a","rho":"1/2","blocks":[[0,1],[2]]},{"id":"b","rho":"1/2","blocks":[[0],[1,2]]}]})");
  const HeatBathSpec back = spec_from_json(j);
  EXPECT_EQ(back.states, spec.states);
  EXPECT_EQ(back.pi, spec.pi);
  EXPECT_EQ(build_chain(back).matrix(), build_chain(spec).matrix());
}

TEST(SpecJson, MalformedInputIsParseError) {
  EXPECT_THROW(spec_from_json(Json::parse(R"({"states":["a"]})")), ParseError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"states":["a"],"pi":["x"]})")), ParseError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"states":["a"],"pi":["1"],"labels":[{"id":"a","rho":"1","blocks":[[-1]]}]})")),
               ParseError);
}

}  // namespace
}  // namespace hbspectra
