#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "test_data.hpp"

namespace ccl {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run ccl_run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return testing::data_path(rel).string(); }

bool contains(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

TEST(Cli, AnalyzeMotivating) {
  const auto r = ccl_run({"analyze", data("corpus/motivating.ccl")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "targets: y5")) << r.out;
}

TEST(Cli, AnalyzeStrategy2Csv) {
  const auto r = ccl_run({"analyze", data("corpus/strategy2.ccl"), "--format", "csv"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "se12")) << r.out;
  EXPECT_FALSE(contains(r.out, "targets,se29"));
}

TEST(Cli, AnalyzeCascadeHasNoTargets) {
  const auto r = ccl_run({"analyze", data("corpus/cascade.ccl")});
  EXPECT_EQ(r.code, cli::kExitNoTargets);
}

TEST(Cli, AnalyzeFromStdinAndBadInput) {
  const auto ok = ccl_run({"analyze", "-"}, testing::read_data("corpus/motivating.ccl"));
  EXPECT_EQ(ok.code, cli::kExitOk);
  const auto bad = ccl_run({"analyze", "-"}, "node se1 se\nnode a1 a\nedge se1 a1\n");
  EXPECT_EQ(bad.code, cli::kExitInputError);
  EXPECT_TRUE(contains(bad.err, "line 3")) << bad.err;
  EXPECT_EQ(ccl_run({"analyze", data("corpus/does-not-exist.ccl")}).code, cli::kExitInputError);
}

TEST(Cli, AnalyzeFlags) {
  const auto r = ccl_run({"analyze", data("corpus/motivating.ccl"), "--tau-mode", "fixed:0", "--patterns",
                          "CWE-1108,CWE-1124", "--min-depth", "2"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "CWE-1124"));
  EXPECT_EQ(ccl_run({"analyze", data("corpus/motivating.ccl"), "--tau-mode", "fixed:-2"}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({"analyze", data("corpus/motivating.ccl"), "--patterns", "CWE-79"}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({"frobnicate"}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({}).code, cli::kExitInputError);
}

TEST(Cli, PlanStrategy1) {
  const auto r = ccl_run({"plan", data("corpus/strategy1.ccl"), "--strategy", "constant", "--seed", "7"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "sensor: se17"));
  EXPECT_TRUE(contains(r.out, "value: 127"));
}

TEST(Cli, PlanWithHistory) {
  const auto r = ccl_run({"plan", data("corpus/strategy2.ccl"), "--strategy", "minimum", "--history",
                          data("corpus/strategy2_history.csv"), "--seed", "1", "--format", "csv"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const bool member = contains(r.out, "\nse8,minimum,74.5,") || contains(r.out, "\nse12,minimum,49.5,") ||
                      contains(r.out, "\nse15,minimum,49.5,");
  EXPECT_TRUE(member) << r.out;
  EXPECT_EQ(r.out, ccl_run({"plan", data("corpus/strategy2.ccl"), "--strategy", "minimum", "--history",
                            data("corpus/strategy2_history.csv"), "--seed", "1", "--format", "csv"})
                       .out);
}

TEST(Cli, PlanUsageErrors) {
  EXPECT_EQ(ccl_run({"plan", data("corpus/strategy2.ccl"), "--strategy", "minimum"}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({"plan", data("corpus/cascade.ccl")}).code, cli::kExitNoTargets);
}

TEST(Cli, EvalTables) {
  const auto t2 = ccl_run({"eval", data("sdt/table2_nodist.csv"), "--targets", "se17", "--format", "csv"});
  EXPECT_EQ(t2.code, cli::kExitOk) << t2.err;
  EXPECT_TRUE(contains(t2.out, "random_avg_sdt_excl_no_shutdown,2.6595"));
  EXPECT_TRUE(contains(t2.out, "guided_avg_sdt,0.1920"));

  const auto t7 = ccl_run({"eval", data("sdt/table7.csv"), "--targets", "se8,se12,se15", "--format", "csv"});
  EXPECT_TRUE(contains(t7.out, "guided_avg_sdt,1.9567"));

  const auto one = ccl_run({"eval", data("sdt/single_row.csv"), "--targets", "se1", "--format", "csv"});
  EXPECT_TRUE(contains(one.out, "random_p_near_optimal,1.0000"));
  EXPECT_TRUE(contains(one.out, "guided_p_near_optimal,1.0000"));
}

TEST(Cli, EvalErrors) {
  EXPECT_EQ(ccl_run({"eval", data("sdt/table2_nodist.csv")}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({"eval", data("sdt/table2_nodist.csv"), "--targets", "se99"}).code, cli::kExitInputError);
  EXPECT_EQ(ccl_run({"eval", "-", "--targets", "se1"}, "sensor,sdt_hours\nse1,-1\n").code, cli::kExitInputError);
}

TEST(Cli, SimulateSingle) {
  const auto r = ccl_run({"simulate", data("plants/demo-single.plant")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "no shutdown"));
  const auto a = ccl_run({"simulate", data("plants/demo-single.plant"), "--attack-sensor", "se1", "--value", "100",
                          "--format", "csv"});
  EXPECT_EQ(a.out, "shutdown,sdt_hours,violating_sensor,steps\n1,1.340,se1,134\n");
  EXPECT_EQ(ccl_run({"simulate", data("plants/demo-override.plant"), "--attack-sensor", "missing"}).code,
            cli::kExitInputError);
}

TEST(Cli, SimulateFeedsEval) {
  for (const auto* name : {"demo-single", "demo-override", "demo-cascade", "demo-shared-sensor"}) {
    const auto plant = data(std::string("plants/") + name + ".plant");
    const auto sim = ccl_run({"simulate", plant, "--all", "--strategy", "constant"});
    ASSERT_EQ(sim.code, cli::kExitOk) << sim.err;
    EXPECT_EQ(sim.out, testing::read_data(std::string("golden/") + name + ".constant.csv"));
    const auto ev = ccl_run({"eval", "-", "--from-graph", plant, "--format", "csv"}, sim.out);
    ASSERT_EQ(ev.code, cli::kExitOk) << ev.err;
    EXPECT_FALSE(contains(ev.out, "guided_p_near_optimal,0.0000")) << name << "\n" << ev.out;
  }
}

}  // namespace
}  // namespace ccl
