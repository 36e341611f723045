#include <cmath>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ccl/error.hpp"
#include "ccl/toyplant.hpp"
#include "test_data.hpp"

namespace ccl {
namespace {

const char* const kFixtures[] = {"demo-single", "demo-override", "demo-cascade", "demo-shared-sensor"};

PlantSpec plant(const std::string& name) { return parse_plant(testing::read_data("plants/" + name + ".plant")); }

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ccl::Error";
  return Errc::syntax;
}

constexpr const char* kLoop =
    "node sp1 ss\nnode se1 se\nnode f1 f\nnode a1 a\n"
    "edge sp1 f1\nedge se1 f1\nedge f1 a1\n";

TEST(ToyPlant, ParsesFixtures) {
  const auto single = plant("demo-single");
  EXPECT_EQ(single.graph.node_count(), 4u);
  EXPECT_EQ(single.couplings.size(), 1u);
  EXPECT_DOUBLE_EQ(single.controller_gain.at("f1"), 20.0);
  EXPECT_TRUE(single.sensors.at("se1").bounded());

  const auto over = plant("demo-override");
  EXPECT_EQ(over.actuator_selector.at("a1"), Selector::Min);
  EXPECT_EQ(selector_name(over.actuator_selector.at("a1")), "min");
  EXPECT_FALSE(over.sensors.at("se4").bounded());
}

TEST(ToyPlant, ParseErrors) {
  const std::string base = std::string(kLoop) + "attr sp1 value=1\nattr f1 gain=1\n";
  const std::string sensor = "attr se1 init=0 base=0 leak=1\n";
  EXPECT_NO_THROW(parse_plant(base + sensor));
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "phys a1 se9 0.5\n"); }), Errc::dangling_coupling);
  EXPECT_EQ(error_of([&] { parse_plant(base + "attr se1 init=0 base=0\n"); }), Errc::missing_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(std::string(kLoop) + sensor + "attr sp1 value=1\n"); }), Errc::missing_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + "attr se1 init=0 base=0 leak=-1\n"); }), Errc::bad_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + "attr se1 init=0 base=0 leak=1 lo=5 hi=5\n"); }), Errc::bad_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + "attr se1 init=0 base=0 leak=x\n"); }), Errc::bad_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + "attr se1 init=0 base=0 leak=1 gain=2\n"); }), Errc::bad_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "attr a1 select=median\n"); }), Errc::bad_attribute);
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "attr zz value=1\n"); }), Errc::unknown_node);
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "phys se1 a1 1\n"); }), Errc::bad_plant);
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "phys a1 se1\n"); }), Errc::syntax);
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "wire a1 se1 1\n"); }), Errc::syntax);
  // Graph errors surface unchanged.
  EXPECT_EQ(error_of([&] { parse_plant(base + sensor + "edge se1 a1\n"); }), Errc::forbidden_shape);
}

TEST(ToyPlant, FunctionInputRules) {
  // A function reading only a sensor has no setpoint.
  EXPECT_EQ(error_of([] {
              parse_plant("node se1 se\nnode f1 f\nnode a1 a\nedge se1 f1\nedge f1 a1\n"
                          "attr f1 gain=1\nattr se1 init=0 base=0 leak=1\n");
            }),
            Errc::bad_plant);
  // Two writers on one calculated setpoint.
  EXPECT_EQ(error_of([] {
              parse_plant("node ss1 ss\nnode se1 se\nnode se2 se\nnode f1 f\nnode f2 f\nnode cs1 cs\n"
                          "edge ss1 f1\nedge se1 f1\nedge ss1 f2\nedge se2 f2\nedge f1 cs1\nedge f2 cs1\n"
                          "attr ss1 value=1\nattr f1 gain=1\nattr f2 gain=1\n"
                          "attr se1 init=0 base=0 leak=1\nattr se2 init=0 base=0 leak=1\n");
            }),
            Errc::bad_plant);
  // Calculated setpoints feeding each other in a ring.
  EXPECT_EQ(error_of([] {
              parse_plant("node f1 f\nnode f2 f\nnode cs1 cs\nnode cs2 cs\nnode ss1 ss\n"
                          "edge cs2 f1\nedge ss1 f1\nedge f1 cs1\nedge cs1 f2\nedge ss1 f2\nedge f2 cs2\n"
                          "attr ss1 value=1\nattr f1 gain=1\nattr f2 gain=1\n");
            }),
            Errc::cycle);
}

TEST(ToyPlant, NoAttackStability) {
  for (const auto* name : kFixtures) {
    const auto out = simulate_attack(plant(name), std::nullopt);
    EXPECT_FALSE(out.shutdown) << name;
    EXPECT_DOUBLE_EQ(out.sdt_hours, 72.0) << name;
    EXPECT_EQ(out.trace_length, 7200u) << name;
  }
}

TEST(ToyPlant, SingleLoopFixedPoint) {
  // Proportional loop: g*K*(sp - s) = leak*(s - base) at rest.
  const auto p = plant("demo-single");
  const double gk = p.couplings[0].gain * p.controller_gain.at("f1");
  const auto& d = p.sensors.at("se1");
  const double rest = (gk * p.setpoint_value.at("sp1") + d.leak * d.base) / (gk + d.leak);
  EXPECT_GT(rest, d.lo);
  EXPECT_LT(rest, d.hi);
  EXPECT_NEAR(rest, d.initial, 1e-6);
}

TEST(ToyPlant, SetpointReportingAttackClosedForm) {
  // Reported value equals the setpoint, so the drive is zero and
  // s(n) = base + (init - base) * (1 - dt*leak)^n until s(n) < lo.
  const auto p = plant("demo-single");
  const auto& d = p.sensors.at("se1");
  for (const double dt : {0.01, 0.005, 0.02}) {
    const double r = 1.0 - dt * d.leak;
    const auto n = static_cast<std::size_t>(std::floor(std::log((d.lo - d.base) / (d.initial - d.base)) / std::log(r))) + 1;
    SimConfig c;
    c.step_hours = dt;
    const auto out = simulate_attack(p, build_attack_plan("se1", AttackStrategy::constant(p.setpoint_value.at("sp1"))), c);
    ASSERT_TRUE(out.shutdown);
    EXPECT_EQ(out.trace_length, n) << dt;
    EXPECT_NEAR(out.sdt_hours, n * dt, 1e-9);
    EXPECT_EQ(out.violating_sensor, "se1");
  }
}

TEST(ToyPlant, ConstantAttackFirstSteps) {
  // Hand iteration of the Euler update with the 127 reading.
  const auto p = plant("demo-single");
  const auto& d = p.sensors.at("se1");
  double s = d.initial;
  std::size_t n = 0;
  while (s >= d.lo && s <= d.hi) {
    s += 0.01 * (20.0 * (100.0 - 127.0) - d.leak * (s - d.base));
    ++n;
  }
  const auto out = simulate_attack(p, build_attack_plan("se1", AttackStrategy::constant()));
  EXPECT_EQ(out.trace_length, n);
  EXPECT_EQ(n, 4u);
}

TEST(ToyPlant, AttackStartOffsetsShutdownTime) {
  const auto p = plant("demo-single");
  SimConfig c;
  c.attack_start_hours = 2.0;
  const auto out = simulate_attack(p, build_attack_plan("se1", AttackStrategy::constant(100.0)), c);
  ASSERT_TRUE(out.shutdown);
  EXPECT_NEAR(out.sdt_hours, 1.34, 1e-9);
  EXPECT_EQ(out.trace_length, 334u);

  const auto none = simulate_attack(plant("demo-override"), build_attack_plan("se4", AttackStrategy::constant()), c);
  EXPECT_FALSE(none.shutdown);
  EXPECT_DOUBLE_EQ(none.sdt_hours, 70.0);
}

TEST(ToyPlant, IsolatedUnboundedSensorNeverShutsDown) {
  const auto out = simulate_attack(plant("demo-override"), build_attack_plan("se4", AttackStrategy::constant()));
  EXPECT_FALSE(out.shutdown);
  EXPECT_FALSE(out.violating_sensor.has_value());
}

TEST(ToyPlant, ConfigAndAttackValidation) {
  const auto p = plant("demo-single");
  SimConfig bad;
  bad.step_hours = 0.0;
  EXPECT_EQ(error_of([&] { simulate_attack(p, std::nullopt, bad); }), Errc::invalid_argument);
  bad = {};
  bad.attack_start_hours = 80.0;
  EXPECT_EQ(error_of([&] { simulate_attack(p, std::nullopt, bad); }), Errc::invalid_argument);
  bad = {};
  bad.attack_start_hours = -1.0;
  EXPECT_EQ(error_of([&] { simulate_attack(p, std::nullopt, bad); }), Errc::invalid_argument);
  EXPECT_EQ(error_of([&] { simulate_attack(p, AttackPlan{"missing", AttackStrategy::constant(), 1.0}); }),
            Errc::unknown_node);
  EXPECT_EQ(error_of([&] { simulate_attack(p, AttackPlan{"f1", AttackStrategy::constant(), 1.0}); }),
            Errc::unknown_node);
}

TEST(ToyPlant, DivergenceIsAnError) {
  const auto p = parse_plant(std::string(kLoop) +
                             "attr sp1 value=1\nattr f1 gain=100000\nattr se1 init=0 base=0 leak=0\nphys a1 se1 1\n");
  EXPECT_EQ(error_of([&] { simulate_attack(p, std::nullopt); }), Errc::divergence);
}

TEST(ToyPlant, SelectorsCombineWriters) {
  // Two functions on one actuator, one sensor each; only the actuator selector differs.
  auto make = [](const char* select) {
    return parse_plant(std::string("node ss1 ss\nnode se1 se\nnode se2 se\nnode f1 f\nnode f2 f\nnode a1 a\n"
                                   "edge ss1 f1\nedge se1 f1\nedge ss1 f2\nedge se2 f2\nedge f1 a1\nedge f2 a1\n"
                                   "attr ss1 value=10\nattr f1 gain=1\nattr f2 gain=2\n"
                                   "attr se1 init=0 base=0 leak=0\nattr se2 init=0 base=0 leak=0 lo=-1 hi=1000\n"
                                   "phys a1 se2 1\nattr a1 select=") +
                       select + "\n");
  };
  SimConfig c;
  c.horizon_hours = 0.01;  // a single step: se2 = dt * selector(10, 20)
  // se2 moves by 0.1, 0.2 or 0.3; none leaves its bounds, so read the value indirectly via lo.
  for (const auto& [sel, moved] : std::vector<std::pair<const char*, double>>{{"min", 0.1}, {"max", 0.2}, {"sum", 0.3}}) {
    auto p = make(sel);
    p.sensors["se2"].hi = moved - 1e-9;
    EXPECT_TRUE(simulate_attack(p, std::nullopt, c).shutdown) << sel;
    p.sensors["se2"].hi = moved + 1e-9;
    EXPECT_FALSE(simulate_attack(p, std::nullopt, c).shutdown) << sel;
  }
}

TEST(ToyPlant, PreAttackViolationIsAPlantError) {
  const auto p = parse_plant(std::string(kLoop) +
                             "attr sp1 value=0\nattr f1 gain=1\nattr se1 init=5 base=100 leak=1 lo=0 hi=10\nphys a1 se1 0\n");
  SimConfig c;
  c.attack_start_hours = 10.0;
  EXPECT_EQ(error_of([&] { simulate_attack(p, build_attack_plan("se1", AttackStrategy::constant()), c); }),
            Errc::bad_plant);
}

TEST(ToyPlant, BruteForceShapeAndDeterminism) {
  const auto p = plant("demo-override");
  const auto a = brute_force_rank(p, AttackStrategy::constant());
  const auto b = brute_force_rank(p, AttackStrategy::constant());
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(format_sdt_csv(a), format_sdt_csv(b));
  for (const auto& r : a.records()) EXPECT_LE(r.sdt_hours, 72.0);
  std::vector<std::string> order;
  for (const auto& r : a.records()) order.push_back(r.sensor);
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));

  SimConfig c;
  c.attack_start_hours = 12.0;
  EXPECT_DOUBLE_EQ(brute_force_rank(p, AttackStrategy::constant(), nullptr, c).horizon(), 60.0);
  EXPECT_THROW(brute_force_rank(p, AttackStrategy::minimum()), Error);
}

TEST(ToyPlant, BruteForceWithHistory) {
  const auto p = plant("demo-single");
  SensorHistory h;
  h.add("se1", {100.0, 101.0});
  const auto t = brute_force_rank(p, AttackStrategy::minimum(), &h);
  EXPECT_NEAR(t.find("se1")->sdt_hours, 1.34, 1e-9);
}

TEST(ToyPlant, StepRefinement) {
  for (const auto* name : kFixtures) {
    const auto p = plant(name);
    SimConfig coarse;
    SimConfig fine;
    fine.step_hours = coarse.step_hours / 2;
    const auto a = brute_force_rank(p, AttackStrategy::constant(), nullptr, coarse);
    const auto b = brute_force_rank(p, AttackStrategy::constant(), nullptr, fine);
    for (const auto& r : a.records()) {
      EXPECT_LT(std::abs(r.sdt_hours - b.find(r.sensor)->sdt_hours), 2 * coarse.step_hours) << name << " " << r.sensor;
    }
  }
}

// Sensors with a cyber path to a function whose actuator couples into a bounded sensor.
std::set<std::string> influential_sensors(const PlantSpec& p) {
  const auto& g = p.graph;
  std::set<std::size_t> frontier_nodes;
  for (const auto& c : p.couplings) {
    if (!p.sensors.at(c.sensor).bounded() || c.gain == 0.0) continue;
    for (const auto f : g.predecessors(g.index_of(c.actuator))) frontier_nodes.insert(f);
  }
  std::set<std::string> out;
  std::deque<std::size_t> queue(frontier_nodes.begin(), frontier_nodes.end());
  std::set<std::size_t> seen = frontier_nodes;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    if (g.node(v).kind == NodeKind::Sensor) out.insert(g.node(v).id);
    for (const auto u : g.predecessors(v)) {
      if (seen.insert(u).second) queue.push_back(u);
    }
  }
  return out;
}

TEST(ToyPlant, InfluenceSoundness) {
  for (const auto* name : kFixtures) {
    const auto p = plant(name);
    const auto reach = influential_sensors(p);
    const auto table = brute_force_rank(p, AttackStrategy::constant());
    for (const auto& r : table.records()) {
      if (!reach.contains(r.sensor)) {
        EXPECT_FALSE(table.shuts_down(r)) << name << " " << r.sensor;
      }
    }
  }
}

TEST(ToyPlant, GoldenTables) {
  for (const auto* name : kFixtures) {
    const auto table = brute_force_rank(plant(name), AttackStrategy::constant());
    EXPECT_EQ(format_sdt_csv(table), testing::read_data(std::string("golden/") + name + ".constant.csv")) << name;
  }
  const auto setpoint = brute_force_rank(plant("demo-single"), AttackStrategy::constant(100.0));
  EXPECT_EQ(format_sdt_csv(setpoint), testing::read_data("golden/demo-single.setpoint.csv"));
}

}  // namespace
}  // namespace ccl
