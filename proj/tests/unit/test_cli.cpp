#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "paracon/commands.hpp"
#include "paracon/scenario.hpp"

using namespace paracon;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = PARACON_SCENARIO_DIR;

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("paracon_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kMinimal = R"({
  "agents": [{"kind": "projector", "set": {"kind": "ball", "center": [0, 0], "radius": 1}},
             {"kind": "projector", "set": {"kind": "halfspace", "a": [1, 0], "c": 0}}],
  "graph_schedule": {"kind": "constant", "graphs": [{"complete": true}]},
  "init": {"x0": [[3, 4], [-1, 2]]}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseWeight, Fractions) {
  EXPECT_EQ(parse_weight("1/3"), 1.0 / 3.0);
  EXPECT_EQ(parse_weight("2/4"), 0.5);
  EXPECT_EQ(parse_weight("0.25"), 0.25);
  EXPECT_THROW(parse_weight("1/0"), InvalidInput);
  EXPECT_THROW(parse_weight("a/3"), InvalidInput);
  EXPECT_THROW(parse_weight("1/3x"), InvalidInput);
}

TEST(ParseScenario, Minimal) {
  const auto f = parse_scenario(kMinimal);
  EXPECT_EQ(f.scenario.agents(), 2u);
  EXPECT_EQ(f.scenario.dimension(), 2u);
  EXPECT_EQ(f.scenario.horizon, 10000u);
  EXPECT_EQ(f.seed, 42u);
  EXPECT_FALSE(f.scenario.weights.has_value());
}

TEST(ParseScenario, ArcsAreOneBasedNeighborToAgent) {
  std::string text = kMinimal;
  text.replace(text.find("{\"complete\": true}"), 18, "{\"arcs\": [[1, 2]]}");
  const auto f = parse_scenario(text);
  const auto& g = f.scenario.schedule.at(1);
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_FALSE(g.has_arc(1, 0));
  EXPECT_TRUE(g.has_all_self_arcs());
}

TEST(ParseScenario, FieldDiagnostics) {
  std::string t = kMinimal;
  t.insert(1, "\"colour\": 1,");
  EXPECT_NE(error_of(t).find("colour: unknown key"), std::string::npos);

  t = kMinimal;
  t.replace(t.find("\"radius\": 1"), 11, "\"radius\": -1");
  EXPECT_NE(error_of(t).find("agents[0].set"), std::string::npos);

  t = kMinimal;
  t.replace(t.find("\"ball\""), 6, "\"blob\"");
  EXPECT_NE(error_of(t).find("agents[0].set.kind: unknown set kind"), std::string::npos);

  t = kMinimal;
  t.replace(t.find("[-1, 2]"), 7, "[-1]");
  EXPECT_NE(error_of(t).find("init.x0"), std::string::npos);

  EXPECT_NE(error_of("{\n  \"agents\": [\n  oops\n}").find("line 3"), std::string::npos);
}

TEST(ParseScenario, WeightsValidatedAgainstGraphs) {
  std::string t = kMinimal;
  t.insert(t.rfind('}'), ", \"weights\": [[[\"1/2\", \"1/2\"], [\"1/3\", \"1/3\"]]]");
  EXPECT_NE(error_of(t).find("weights[0]"), std::string::npos);
}

TEST(ParseScenario, WitnessMustBeFixed) {
  std::string t = kMinimal;
  t.insert(t.rfind('}'), ", \"witness\": [5, 5]");
  EXPECT_NE(error_of(t).find("witness: not fixed by agent 1"), std::string::npos);
}

TEST(CmdRun, ExitCodesAndFiles) {
  const auto out = temp_dir("run");
  std::ostringstream o, e;
  EXPECT_EQ(cmd_run(kScenarios / "linear_complete.json", out / "lin", o, e), 0);
  for (const char* f : {"trace.csv", "metrics.csv", "summary.txt"}) EXPECT_TRUE(fs::exists(out / "lin" / f)) << f;
  EXPECT_NE(slurp(out / "lin" / "summary.txt").find("converged: yes"), std::string::npos);

  EXPECT_EQ(cmd_run(kScenarios / "counterexample.json", out / "ce", o, e), 2);
  const auto bad = write_file(out, "bad.json", "{\"agents\": 3}");
  std::ostringstream err;
  EXPECT_EQ(cmd_run(bad, out / "bad", o, err), 1);
  EXPECT_NE(err.str().find("agents"), std::string::npos);
  EXPECT_EQ(cmd_run(out / "missing.json", out / "m", o, e), 1);
}

TEST(CmdRun, Deterministic) {
  const auto out = temp_dir("det");
  std::ostringstream o, e;
  ASSERT_EQ(cmd_run(kScenarios / "random_schedule.json", out / "a", o, e), 0);
  ASSERT_EQ(cmd_run(kScenarios / "random_schedule.json", out / "b", o, e), 0);
  EXPECT_EQ(slurp(out / "a" / "trace.csv"), slurp(out / "b" / "trace.csv"));
}

TEST(CmdRun, UniformWeightsReproduceDefaultOutput) {
  const auto out = temp_dir("weights");
  std::ostringstream o, e;
  ASSERT_EQ(cmd_run(kScenarios / "linear_periodic.json", out / "a", o, e), 0);
  ASSERT_EQ(cmd_run(kScenarios / "linear_periodic_uniform_weights.json", out / "b", o, e), 0);
  EXPECT_EQ(slurp(out / "a" / "trace.csv"), slurp(out / "b" / "trace.csv"));
}

TEST(CmdVerify, ExitCodes) {
  const auto out = temp_dir("verify");
  std::ostringstream o, e;
  EXPECT_EQ(cmd_verify({"check_counterexample"}, 42, out, o, e), 0);
  EXPECT_NE(slurp(out / "report.csv").find("check_counterexample,"), std::string::npos);
  EXPECT_EQ(cmd_verify({"nosuchcheck"}, 42, "", o, e), 1);
  EXPECT_EQ(cmd_verify({}, 42, "", o, e), 1);
}

TEST(CmdCertify, ExitCodes) {
  std::ostringstream o, e;
  EXPECT_EQ(cmd_certify(kScenarios / "linear_complete.json", 4, 20, o, e), 0);
  EXPECT_NE(o.str().find("l=1 rho0=1"), std::string::npos);
  EXPECT_EQ(cmd_certify(kScenarios / "counterexample.json", 6, 20, o, e), 3);
  // The seeded schedule stops at t = 20000.
  EXPECT_EQ(cmd_certify(kScenarios / "random_schedule.json", 2, 100000, o, e), 1);
}
