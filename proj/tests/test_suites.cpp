#include "ngd/suites.hpp"

#include <gtest/gtest.h>

using namespace ngd;

namespace {

SuiteConfig small(const std::string& model, int dim = 1) {
  SuiteConfig c;
  c.model = model;
  c.dim = dim;
  c.samples = 200;
  return c;
}

void expect_pass(const std::vector<SuiteResult>& results) {
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) EXPECT_TRUE(r.passed()) << r.summary();
}

}  // namespace

TEST(Suites, AxiomsPassOnBothModels) {
  expect_pass(run_suite("axioms", small("euclidean", 2)));
  expect_pass(run_suite("axioms", small("heisenberg")));
}

TEST(Suites, IrqPassOnBothModels) {
  expect_pass(run_suite("irq", small("euclidean", 3)));
  expect_pass(run_suite("irq", small("heisenberg")));
}

TEST(Suites, LimitsPassOnBothModels) {
  expect_pass(run_suite("limits", small("euclidean", 2)));
  expect_pass(run_suite("limits", small("heisenberg")));
}

TEST(Suites, TransportPasses) { expect_pass(run_suite("transport", small("euclidean"))); }

TEST(Suites, PlantedDefectsAreAllCaught) {
  const auto r = run_suite("planted", small("euclidean"));
  ASSERT_EQ(r.size(), 1u);
  ASSERT_EQ(r[0].reports.size(), 4u);
  for (const auto& rep : r[0].reports) EXPECT_FALSE(rep.passed()) << rep.summary();
}

TEST(Suites, AllExpandsToFourSuites) {
  auto c = small("euclidean");
  c.samples = 50;
  const auto r = run_suite("all", c);
  EXPECT_EQ(r.size(), 4u);
  const auto j = r[0].to_json();
  EXPECT_TRUE(j.contains("reports"));
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Suites, RejectsUnknownNames) {
  EXPECT_THROW(run_suite("nope", SuiteConfig{}), PreconditionError);
  auto c = SuiteConfig{};
  c.model = "sphere";
  EXPECT_THROW(run_suite("axioms", c), PreconditionError);
}
