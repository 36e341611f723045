#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccl/evaluation.hpp"
#include "ccl/graph.hpp"
#include "ccl/targeting.hpp"

namespace ccl {

struct SensorDynamics {
  double initial = 0.0;
  double base = 0.0;
  double leak = 0.0;  // first-order pull towards `base`, per hour
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const noexcept {
    return lo > -std::numeric_limits<double>::infinity() || hi < std::numeric_limits<double>::infinity();
  }
};

enum class Selector { Min, Max, Sum };

std::string_view selector_name(Selector selector) noexcept;

struct PhysCoupling {
  std::string actuator;
  std::string sensor;
  double gain = 0.0;
};

/// A CCL graph with proportional controllers and first-order sensor physics.
struct PlantSpec {
  CclGraph graph;
  std::map<std::string, double, std::less<>> controller_gain;  // per function
  std::map<std::string, double, std::less<>> setpoint_value;   // per static setpoint
  std::map<std::string, SensorDynamics, std::less<>> sensors;
  std::vector<PhysCoupling> couplings;
  std::map<std::string, Selector, std::less<>> actuator_selector;  // absent = min
};

/// Graph format plus `attr <id> <key>=<value>` and `phys <actuator> <sensor> <gain>` lines.
PlantSpec parse_plant(std::string_view text);

struct SimConfig {
  double step_hours = 0.01;
  double horizon_hours = kDefaultHorizonHours;
  double attack_start_hours = 0.0;

  void validate() const;
  double attack_window() const noexcept { return horizon_hours - attack_start_hours; }
};

struct SimOutcome {
  bool shutdown = false;
  double sdt_hours = 0.0;  // attack window length when no shutdown
  std::optional<std::string> violating_sensor;
  std::size_t trace_length = 0;  // integration steps executed
};

/// Explicit-Euler run of the plant. Throws Errc::divergence on non-finite state.
SimOutcome simulate_attack(const PlantSpec& plant, const std::optional<AttackPlan>& attack,
                           const SimConfig& config = {});

/// One simulation per sensor; table horizon is the attack window.
SdtTable brute_force_rank(const PlantSpec& plant, const AttackStrategy& strategy,
                          const SensorHistory* history = nullptr, const SimConfig& config = {});

}  // namespace ccl
