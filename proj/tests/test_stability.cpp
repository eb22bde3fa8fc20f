#include <gtest/gtest.h>

#include "qgraph/enumerate.hpp"
#include "qgraph/error.hpp"
#include "qgraph/stability.hpp"
#include "support/oracles.hpp"

namespace qgraph {
namespace {

using testing::kPi;

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ParseError;
}

MetricGraph kite_graph() {
  const std::vector<std::pair<std::size_t, std::size_t>> e{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  return graph_from_edges(4, e);
}

TEST(Lambda2, RegularExamples) {
  EXPECT_NEAR(lambda2_regular(complete_graph(3)), -std::pow(2 * kPi / 3, 2), 1e-12);
  EXPECT_NEAR(lambda2_regular(cycle_graph(4)), -kPi * kPi / 4, 1e-12);
  EXPECT_NEAR(lambda2_regular(complete_graph(4)), -std::pow(std::acos(-1.0 / 3.0), 2), 1e-12);
  EXPECT_NEAR(lambda2_regular(cycle_graph(6)), -std::pow(kPi / 3, 2), 1e-12);
}

TEST(Lambda2, FormulaPreconditions) {
  const MetricGraph kite = kite_graph();
  EXPECT_EQ(error_of([&] { lambda2_regular(kite); }), ErrorCode::NotRegular);
  EXPECT_EQ(error_of([] { lambda2_regular(complete_graph(3, 2.0)); }), ErrorCode::NotUnitSpeed);
  const MetricGraph uneven = validate(RawGraph{{"a", "b", "c"},
                                               {{"1", "a", "b", 1.0, 1.0}, {"2", "b", "c", 1.0, 2.0}, {"3", "c", "a", 1.0, 1.0}}});
  EXPECT_EQ(error_of([&] { lambda2_regular(uneven); }), ErrorCode::NonuniformNodeWeight);
  EXPECT_EQ(error_of([&] { convergence_bound(kite, 0.01); }), ErrorCode::NotRegular);
}

TEST(Lambda2, SpectralMatchesFormula) {
  for (const MetricGraph& g : {complete_graph(3), cycle_graph(5), complete_graph(5)}) {
    EXPECT_NEAR(lambda2_spectral(g), lambda2_regular(g), 1e-10);
  }
  const MetricGraph two_speed = validate(RawGraph{{"v1", "v2", "v3", "v4"},
                                                  {{"e1", "v1", "v2", 1.0, 1.0},
                                                   {"e2", "v2", "v3", 1.0, 1.0},
                                                   {"e3", "v3", "v4", 4.0, 1.0},
                                                   {"e4", "v4", "v1", 4.0, 1.0}}});
  EXPECT_NEAR(lambda2_spectral(two_speed), -3.65051936345937, 1e-9);
}

TEST(Bounds, Examples) {
  const MetricGraph k3 = complete_graph(3);
  EXPECT_NEAR(nu2_bound_edge_connectivity(k3), 2.0, 1e-14);
  EXPECT_NEAR(nu2_bound_diameter(k3), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(nu2_bound_diameter(cycle_graph(6)), 4.0 / 18.0, 1e-14);
  EXPECT_DOUBLE_EQ(bound_exponent(0.0, 3.0), 0.0);
  EXPECT_NEAR(bound_exponent(6.0, 3.0), -kPi * kPi, 1e-12);
  EXPECT_NEAR(bound_exponent(3.0, 3.0), -kPi * kPi / 4, 1e-12);
}

TEST(Bounds, HoldOnSmallGraphs) {
  for (std::size_t n = 3; n <= 6; ++n) {
    for_each_graph(n, {}, [](const MetricGraph& g) {
      const double nu2 = graph_params(g).nu2();
      EXPECT_LE(nu2_bound_edge_connectivity(g), nu2 + 1e-12);
      EXPECT_LE(nu2_bound_diameter(g), nu2 + 1e-12);
    });
  }
}

TEST(Report, RegularGraph) {
  const StabilityReport r = convergence_bound(complete_graph(4), 0.01, -3.7);
  ASSERT_TRUE(r.gamma);
  EXPECT_EQ(*r.gamma, 3u);
  ASSERT_TRUE(r.lambda2_formula);
  EXPECT_TRUE(r.formula_matches);
  EXPECT_TRUE(r.exponents_hold);
  EXPECT_TRUE(r.slope_within_rate);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.lambda2, *r.eta_exponent);
  EXPECT_LE(r.lambda2, *r.diam_exponent);
}

TEST(Report, SlopeAboveRateIsFlagged) {
  const StabilityReport r = stability_report(complete_graph(3), 0.01, -2.0);
  EXPECT_FALSE(r.slope_within_rate);
  EXPECT_FALSE(r.ok());
  EXPECT_THROW(stability_report(complete_graph(3), 0.0), std::invalid_argument);
}

TEST(Report, IrregularGraphLeavesFormulaOut) {
  const MetricGraph kite = kite_graph();
  const StabilityReport r = stability_report(kite, 0.01);
  EXPECT_FALSE(r.gamma);
  EXPECT_FALSE(r.lambda2_formula);
  EXPECT_FALSE(r.eta_exponent);
  EXPECT_TRUE(r.ok());
  EXPECT_LT(r.lambda2, 0.0);
}

}  // namespace
}  // namespace qgraph
