#include <gtest/gtest.h>

#include "pinn/verify.hpp"

using namespace pinn;

TEST(Verify, CheckCountAndOrder) {
  const auto rep = run_verification(worked_example_targets());
  // 6 tables: 4 * 3 + 4 * 3 + 4 * 1 per time point, 4 loss, 4 gradients, 1 update.
  EXPECT_EQ(rep.checks.size(), 2u * (12 + 12 + 4) + 4 + 4 + 1);
  EXPECT_EQ(rep.checks.front().name, "z[1]");
  EXPECT_EQ(rep.checks.back().name, "W3_12 after GD step");
  const auto with = run_verification(worked_example_targets(), GradientEngine::Sensitivity, true);
  EXPECT_EQ(with.checks.size(), rep.checks.size() + 8);
}

TEST(Verify, EnginesGiveSameVerdicts) {
  const auto t = worked_example_targets();
  const auto s = run_verification(t, GradientEngine::Sensitivity);
  const auto a = run_verification(t, GradientEngine::Adjoint);
  ASSERT_EQ(s.checks.size(), a.checks.size());
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    EXPECT_EQ(s.checks[i].pass, a.checks[i].pass) << s.checks[i].name;
    EXPECT_NEAR(s.checks[i].value, a.checks[i].value, 1e-10);
  }
}

TEST(Verify, PerturbedTargetIsReportedAsFailure) {
  auto t = worked_example_targets();
  const auto base = run_verification(t);
  t.l_total += 0.5;
  const auto rep = run_verification(t);
  EXPECT_EQ(rep.failures(), base.failures() + 1);
  const std::string text = format_report(rep, t);
  EXPECT_NE(text.find("L_total"), std::string::npos);
  const auto pos = text.find("L_total");
  const auto eol = text.find('\n', pos);
  EXPECT_NE(text.substr(pos, eol - pos).find("FAIL"), std::string::npos);
}

TEST(Verify, FlatIndexMatchesFlatten) {
  auto p = init_worked_example_params();
  const auto ref = ParamRef::weight(1, 2, 1);
  p.layers[1].weights(2, 1) = 123.0;
  EXPECT_EQ(flatten(p)[flat_index(p, ref)], 123.0);
  p.layers[2].biases[0] = -77.0;
  EXPECT_EQ(flatten(p)[flat_index(p, ParamRef::bias(2, 0))], -77.0);
}

TEST(Verify, JsonReportHasNoTiming) {
  const auto rep = run_verification(worked_example_targets());
  const auto j = report_to_json(rep);
  EXPECT_FALSE(j.contains("elapsed_seconds"));
  EXPECT_EQ(j["checks"].size(), rep.checks.size());
  EXPECT_EQ(to_json_text(j), to_json_text(report_to_json(run_verification(worked_example_targets()))));
}
