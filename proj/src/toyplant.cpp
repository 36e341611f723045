#include "ccl/toyplant.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <set>

#include <fmt/format.h>

#include "ccl/error.hpp"
#include "graph_text.hpp"
#include "text.hpp"

namespace ccl {

std::string_view selector_name(Selector selector) noexcept {
  switch (selector) {
    case Selector::Min: return "min";
    case Selector::Max: return "max";
    case Selector::Sum: return "sum";
  }
  return "?";
}

namespace {

struct AttrLine {
  std::size_t line;
  text::Token id;
  std::vector<text::Token> pairs;
};

struct PhysLine {
  std::size_t line;
  std::vector<text::Token> tokens;
};

bool allowed_key(NodeKind kind, std::string_view key) {
  switch (kind) {
    case NodeKind::Function: return key == "gain";
    case NodeKind::StaticSetpoint: return key == "value";
    case NodeKind::Sensor:
      return key == "init" || key == "base" || key == "leak" || key == "lo" || key == "hi";
    case NodeKind::Actuator: return key == "select";
    case NodeKind::CalculatedSetpoint: return false;
  }
  return false;
}

bool is_setpoint_like(NodeKind k) { return k == NodeKind::StaticSetpoint || k == NodeKind::CalculatedSetpoint; }

// Role of a control function's two inputs: which one is the setpoint, which the measurement.
struct FunctionInputs {
  std::size_t setpoint;
  std::size_t measurement;
};

FunctionInputs classify_inputs(const CclGraph& g, std::size_t f) {
  const auto preds = g.predecessors(f);
  const auto& id = g.node(f).id;
  if (preds.size() != 2) {
    throw Error(Errc::bad_plant, fmt::format("function '{}' needs exactly 2 inputs (setpoint and measurement), has {}",
                                             id, preds.size()));
  }
  const auto a = preds[0];
  const auto b = preds[1];
  const auto ka = g.node(a).kind;
  const auto kb = g.node(b).kind;
  if (ka == NodeKind::Sensor && is_setpoint_like(kb)) return {b, a};
  if (kb == NodeKind::Sensor && is_setpoint_like(ka)) return {a, b};
  if (ka == NodeKind::StaticSetpoint && kb == NodeKind::CalculatedSetpoint) return {a, b};
  if (kb == NodeKind::StaticSetpoint && ka == NodeKind::CalculatedSetpoint) return {b, a};
  throw Error(Errc::bad_plant, fmt::format("function '{}': cannot tell setpoint from measurement ({} and {})", id,
                                           kind_tag(ka), kind_tag(kb)));
}

// Control functions ordered so that every calculated setpoint is written before it is read.
std::vector<std::size_t> function_order(const CclGraph& g) {
  const auto n = g.node_count();
  std::vector<std::size_t> pending(n, 0);
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    pending[v] = g.predecessors(v).size();
    if (pending[v] == 0) ready.push_back(v);
  }
  std::vector<std::size_t> order;
  std::size_t processed = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++processed;
    if (g.node(v).kind == NodeKind::Function) order.push_back(v);
    for (const auto w : g.successors(v)) {
      if (--pending[w] == 0) ready.push_back(w);
    }
  }
  if (processed != n) throw Error(Errc::cycle, "plant control functions form a circular dependency");
  return order;
}

}  // namespace

PlantSpec parse_plant(std::string_view document) {
  GraphBuilder builder;
  std::vector<AttrLine> attrs;
  std::vector<PhysLine> phys;
  for (const auto& line : text::tokenize(document)) {
    if (detail::apply_graph_directive(builder, line)) continue;
    const auto& head = line.tokens.front();
    if (head.text == "attr") {
      if (line.tokens.size() < 3) {
        throw Error(Errc::syntax, "'attr' expects an id and at least one key=value", line.number, head.column);
      }
      attrs.push_back({line.number, line.tokens[1], {line.tokens.begin() + 2, line.tokens.end()}});
    } else if (head.text == "phys") {
      if (line.tokens.size() != 4) {
        throw Error(Errc::syntax, "'phys' expects <actuator> <sensor> <gain>", line.number, head.column);
      }
      phys.push_back({line.number, line.tokens});
    } else {
      throw Error(Errc::syntax, fmt::format("unknown directive '{}'", head.text), line.number, head.column);
    }
  }

  PlantSpec plant;
  plant.graph = std::move(builder).build();
  const auto& g = plant.graph;

  std::map<std::string, std::map<std::string, double>, std::less<>> numeric;
  for (const auto& a : attrs) {
    const auto idx = g.find(a.id.text);
    if (!idx) throw Error(Errc::unknown_node, fmt::format("attr on undeclared node '{}'", a.id.text), a.line, a.id.column);
    const auto kind = g.node(*idx).kind;
    for (const auto& pair : a.pairs) {
      const auto eq = pair.text.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(Errc::bad_attribute, fmt::format("expected key=value, got '{}'", pair.text), a.line, pair.column);
      }
      const auto key = pair.text.substr(0, eq);
      const auto value = pair.text.substr(eq + 1);
      if (!allowed_key(kind, key)) {
        throw Error(Errc::bad_attribute, fmt::format("key '{}' does not apply to {} node '{}'", key, kind_tag(kind), a.id.text),
                    a.line, pair.column);
      }
      if (key == "select") {
        Selector s;
        if (value == "min") s = Selector::Min;
        else if (value == "max") s = Selector::Max;
        else if (value == "sum") s = Selector::Sum;
        else throw Error(Errc::bad_attribute, fmt::format("selector must be min, max or sum, got '{}'", value), a.line, pair.column);
        if (!plant.actuator_selector.emplace(std::string(a.id.text), s).second) {
          throw Error(Errc::bad_attribute, fmt::format("duplicate select on '{}'", a.id.text), a.line, pair.column);
        }
        continue;
      }
      const auto v = text::parse_double(value);
      if (!v || !std::isfinite(*v)) {
        throw Error(Errc::bad_attribute, fmt::format("'{}' is not a finite number", value), a.line, pair.column);
      }
      if (!numeric[std::string(a.id.text)].emplace(std::string(key), *v).second) {
        throw Error(Errc::bad_attribute, fmt::format("duplicate key '{}' on '{}'", key, a.id.text), a.line, pair.column);
      }
    }
  }

  auto require = [&](const std::string& id, const char* key) {
    const auto it = numeric.find(id);
    if (it == numeric.end() || !it->second.contains(key)) {
      throw Error(Errc::missing_attribute, fmt::format("node '{}' is missing attribute '{}'", id, key));
    }
    return it->second.at(key);
  };
  auto optional = [&](const std::string& id, const char* key) -> std::optional<double> {
    const auto it = numeric.find(id);
    if (it == numeric.end() || !it->second.contains(key)) return std::nullopt;
    return it->second.at(key);
  };

  for (const auto& n : g.nodes()) {
    switch (n.kind) {
      case NodeKind::Function: plant.controller_gain[n.id] = require(n.id, "gain"); break;
      case NodeKind::StaticSetpoint: plant.setpoint_value[n.id] = require(n.id, "value"); break;
      case NodeKind::Sensor: {
        SensorDynamics d;
        d.initial = require(n.id, "init");
        d.base = require(n.id, "base");
        d.leak = require(n.id, "leak");
        if (d.leak < 0.0) throw Error(Errc::bad_attribute, fmt::format("sensor '{}': leak must be >= 0", n.id));
        if (const auto lo = optional(n.id, "lo")) d.lo = *lo;
        if (const auto hi = optional(n.id, "hi")) d.hi = *hi;
        if (!(d.lo < d.hi)) throw Error(Errc::bad_attribute, fmt::format("sensor '{}': need lo < hi", n.id));
        plant.sensors[n.id] = d;
        break;
      }
      case NodeKind::Actuator:
      case NodeKind::CalculatedSetpoint: break;
    }
  }

  for (const auto& p : phys) {
    const auto& act = p.tokens[1];
    const auto& sen = p.tokens[2];
    const auto ai = g.find(act.text);
    const auto si = g.find(sen.text);
    if (!ai || !si) {
      const auto& missing = !ai ? act : sen;
      throw Error(Errc::dangling_coupling, fmt::format("physical coupling refers to undeclared node '{}'", missing.text),
                  p.line, missing.column);
    }
    if (g.node(*ai).kind != NodeKind::Actuator || g.node(*si).kind != NodeKind::Sensor) {
      throw Error(Errc::bad_plant, "physical couplings run from an actuator to a sensor", p.line, act.column);
    }
    const auto gain = text::parse_double(p.tokens[3].text);
    if (!gain || !std::isfinite(*gain)) {
      throw Error(Errc::bad_attribute, fmt::format("'{}' is not a finite gain", p.tokens[3].text), p.line,
                  p.tokens[3].column);
    }
    plant.couplings.push_back({std::string(act.text), std::string(sen.text), *gain});
  }

  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto& n = g.node(v);
    if (n.kind == NodeKind::Function) classify_inputs(g, v);
    if (n.kind == NodeKind::CalculatedSetpoint && g.predecessors(v).size() != 1) {
      throw Error(Errc::bad_plant, fmt::format("calculated setpoint '{}' needs exactly one writer", n.id));
    }
  }
  function_order(g);
  return plant;
}

void SimConfig::validate() const {
  if (!std::isfinite(step_hours) || step_hours <= 0.0) throw Error(Errc::invalid_argument, "step must be > 0");
  if (!std::isfinite(attack_start_hours) || attack_start_hours < 0.0) {
    throw Error(Errc::invalid_argument, "attack start must be >= 0");
  }
  if (!std::isfinite(horizon_hours) || horizon_hours <= attack_start_hours) {
    throw Error(Errc::invalid_argument, "horizon must exceed the attack start");
  }
}

namespace {

// Index-based form of a PlantSpec, built once per simulation.
struct CompiledPlant {
  struct Function {
    double gain;
    std::size_t setpoint;
    std::size_t measurement;
  };
  const CclGraph* graph;
  std::vector<std::size_t> order;           // functions, dependency-sorted
  std::vector<Function> functions;          // by node index (only function slots used)
  std::vector<double> static_value;         // by node index
  std::vector<std::size_t> sensor_nodes;    // sensors in id order
  std::vector<std::size_t> sensor_slot;     // node index -> position in sensor_nodes
  std::vector<SensorDynamics> dynamics;     // by sensor slot
  std::vector<std::size_t> actuators;       // node indices
  std::vector<Selector> selector;           // by node index
  struct Coupling {
    std::size_t actuator;
    std::size_t sensor_slot;
    double gain;
  };
  std::vector<Coupling> couplings;

  explicit CompiledPlant(const PlantSpec& p) : graph(&p.graph) {
    const auto& g = p.graph;
    const auto n = g.node_count();
    order = function_order(g);
    functions.resize(n);
    static_value.assign(n, 0.0);
    sensor_slot.assign(n, static_cast<std::size_t>(-1));
    selector.assign(n, Selector::Min);
    for (std::size_t v = 0; v < n; ++v) {
      const auto& node = g.node(v);
      switch (node.kind) {
        case NodeKind::Function: {
          const auto in = classify_inputs(g, v);
          functions[v] = {p.controller_gain.at(node.id), in.setpoint, in.measurement};
          break;
        }
        case NodeKind::StaticSetpoint: static_value[v] = p.setpoint_value.at(node.id); break;
        case NodeKind::Sensor:
          sensor_slot[v] = sensor_nodes.size();
          sensor_nodes.push_back(v);
          dynamics.push_back(p.sensors.at(node.id));
          break;
        case NodeKind::Actuator:
          actuators.push_back(v);
          if (const auto it = p.actuator_selector.find(node.id); it != p.actuator_selector.end()) {
            selector[v] = it->second;
          }
          break;
        case NodeKind::CalculatedSetpoint: break;
      }
    }
    for (const auto& c : p.couplings) {
      couplings.push_back({g.index_of(c.actuator), sensor_slot[g.index_of(c.sensor)], c.gain});
    }
  }
};

}  // namespace

SimOutcome simulate_attack(const PlantSpec& plant, const std::optional<AttackPlan>& attack, const SimConfig& config) {
  config.validate();
  const CompiledPlant cp(plant);
  const auto& g = plant.graph;

  std::size_t attacked = static_cast<std::size_t>(-1);
  if (attack) {
    const auto idx = g.find(attack->sensor);
    if (!idx || g.node(*idx).kind != NodeKind::Sensor) {
      throw Error(Errc::unknown_node, fmt::format("attack target '{}' is not a sensor of the plant", attack->sensor));
    }
    if (!std::isfinite(attack->value)) throw Error(Errc::invalid_argument, "attack value must be finite");
    attacked = *idx;
  }

  const auto n = g.node_count();
  std::vector<double> truth(cp.sensor_nodes.size());
  for (std::size_t s = 0; s < truth.size(); ++s) truth[s] = cp.dynamics[s].initial;
  std::vector<double> value(n, 0.0);  // per-step signal on every node
  std::vector<double> drive(cp.sensor_nodes.size());

  const double dt = config.step_hours;
  const auto steps = static_cast<std::size_t>(std::ceil(config.horizon_hours / dt - 1e-9));
  const double eps = 1e-9 * dt;

  for (std::size_t step = 1; step <= steps; ++step) {
    const double t0 = static_cast<double>(step - 1) * dt;
    const double t1 = static_cast<double>(step) * dt;

    for (std::size_t v = 0; v < n; ++v) {
      switch (g.node(v).kind) {
        case NodeKind::StaticSetpoint: value[v] = cp.static_value[v]; break;
        case NodeKind::Sensor: value[v] = truth[cp.sensor_slot[v]]; break;
        default: value[v] = 0.0; break;
      }
    }
    if (attack && t0 >= config.attack_start_hours - eps) value[attacked] = attack->value;

    std::vector<std::vector<double>> writes(n);
    for (const auto f : cp.order) {
      const auto& fn = cp.functions[f];
      const double out = fn.gain * (value[fn.setpoint] - value[fn.measurement]);
      value[f] = out;
      for (const auto w : g.successors(f)) {
        if (g.node(w).kind == NodeKind::CalculatedSetpoint) {
          value[w] = out;
        } else {
          writes[w].push_back(out);
        }
      }
    }
    for (const auto a : cp.actuators) {
      const auto& in = writes[a];
      if (in.empty()) continue;
      switch (cp.selector[a]) {
        case Selector::Min: value[a] = *std::min_element(in.begin(), in.end()); break;
        case Selector::Max: value[a] = *std::max_element(in.begin(), in.end()); break;
        case Selector::Sum:
          value[a] = 0.0;
          for (const auto x : in) value[a] += x;
          break;
      }
    }

    std::fill(drive.begin(), drive.end(), 0.0);
    for (const auto& c : cp.couplings) drive[c.sensor_slot] += c.gain * value[c.actuator];
    for (std::size_t s = 0; s < truth.size(); ++s) {
      const auto& d = cp.dynamics[s];
      truth[s] += dt * (drive[s] - d.leak * (truth[s] - d.base));
      if (!std::isfinite(truth[s])) {
        throw Error(Errc::divergence, fmt::format("sensor '{}' became non-finite at t = {:.3f} h",
                                                  g.node(cp.sensor_nodes[s]).id, t1));
      }
    }

    for (std::size_t s = 0; s < truth.size(); ++s) {
      const auto& d = cp.dynamics[s];
      if (truth[s] >= d.lo && truth[s] <= d.hi) continue;
      if (t1 < config.attack_start_hours - eps) {
        throw Error(Errc::bad_plant, fmt::format("sensor '{}' left its bounds at t = {:.3f} h, before the attack started",
                                                 g.node(cp.sensor_nodes[s]).id, t1));
      }
      SimOutcome out;
      out.shutdown = true;
      out.sdt_hours = std::max(0.0, t1 - config.attack_start_hours);
      out.violating_sensor = g.node(cp.sensor_nodes[s]).id;
      out.trace_length = step;
      return out;
    }
  }

  SimOutcome out;
  out.shutdown = false;
  out.sdt_hours = config.attack_window();
  out.trace_length = steps;
  return out;
}

SdtTable brute_force_rank(const PlantSpec& plant, const AttackStrategy& strategy, const SensorHistory* history,
                          const SimConfig& config) {
  config.validate();
  const auto sensors = plant.graph.ids_of_kind(NodeKind::Sensor);
  if (sensors.empty()) throw Error(Errc::invalid_argument, "plant has no sensors to attack");

  std::vector<AttackPlan> plans;
  plans.reserve(sensors.size());
  for (const auto& s : sensors) plans.push_back(build_attack_plan(s, strategy, history));

  // Runs are independent; results are gathered in sensor-id order regardless of scheduling.
  std::vector<std::future<SimOutcome>> runs;
  runs.reserve(plans.size());
  for (const auto& plan : plans) {
    runs.push_back(std::async(std::launch::async, [&plant, plan, config] { return simulate_attack(plant, plan, config); }));
  }
  std::vector<SdtRecord> records;
  records.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) records.push_back({plans[i].sensor, runs[i].get().sdt_hours});
  return SdtTable(std::move(records), config.attack_window());
}

}  // namespace ccl
