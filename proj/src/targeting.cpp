#include "ccl/targeting.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "ccl/error.hpp"
#include "text.hpp"

namespace ccl {

TargetSet select_target_set(std::span<const SensorResult> results) {
  if (results.empty()) throw Error(Errc::invalid_argument, "target selection needs at least one result set");
  TargetSet t;
  for (const auto& r : results) {
    for (const auto& sensor : r.sensors) ++t.scores[sensor];
  }
  if (t.scores.empty()) throw Error(Errc::no_targets, "no pattern produced a candidate sensor");
  for (const auto& [sensor, score] : t.scores) t.top_score = std::max(t.top_score, score);
  for (const auto& [sensor, score] : t.scores) {
    if (score == t.top_score) t.targets.insert(sensor);
  }
  return t;
}

std::string choose_single_target(const TargetSet& targets, std::uint64_t seed) {
  if (targets.targets.empty()) throw Error(Errc::invalid_argument, "cannot choose from an empty target set");
  const std::uint64_t n = targets.targets.size();
  std::mt19937_64 gen(seed);
  // Reject the top partial block so every index is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = gen();
  while (draw >= limit) draw = gen();
  auto it = targets.targets.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(draw % n));
  return *it;
}

AttackStrategy AttackStrategy::constant(double value) {
  if (!std::isfinite(value)) throw Error(Errc::invalid_argument, "constant attack value must be finite");
  return {Kind::Constant, value};
}

AttackStrategy AttackStrategy::parse(std::string_view name) {
  if (name == "constant") return constant();
  if (name == "minimum" || name == "min") return minimum();
  if (name == "maximum" || name == "max") return maximum();
  throw Error(Errc::invalid_argument, fmt::format("unknown attack strategy '{}'", name));
}

std::string_view strategy_name(AttackStrategy::Kind kind) noexcept {
  switch (kind) {
    case AttackStrategy::Kind::Constant: return "constant";
    case AttackStrategy::Kind::Minimum: return "minimum";
    case AttackStrategy::Kind::Maximum: return "maximum";
  }
  return "?";
}

void SensorHistory::add(std::string sensor, ObservedRange range) {
  if (!std::isfinite(range.min) || !std::isfinite(range.max) || range.min > range.max) {
    throw Error(Errc::bad_value, fmt::format("sensor '{}': need finite min <= max", sensor));
  }
  if (!ranges_.emplace(sensor, range).second) {
    throw Error(Errc::duplicate_record, fmt::format("sensor '{}' listed twice in history", sensor));
  }
}

const ObservedRange* SensorHistory::find(std::string_view sensor) const {
  const auto it = ranges_.find(sensor);
  return it == ranges_.end() ? nullptr : &it->second;
}

SensorHistory parse_sensor_history(std::string_view csv) {
  const auto rows = text::csv_rows(csv);
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"sensor", "min", "max"}) {
    throw Error(Errc::syntax, "history CSV must start with header 'sensor,min,max'", rows.empty() ? 1 : rows.front().number);
  }
  SensorHistory history;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != 3 || row.fields[0].empty()) {
      throw Error(Errc::syntax, "expected 3 fields: sensor,min,max", row.number);
    }
    const auto lo = text::parse_double(row.fields[1]);
    const auto hi = text::parse_double(row.fields[2]);
    if (!lo || !hi) throw Error(Errc::syntax, "min and max must be decimal numbers", row.number);
    try {
      history.add(row.fields[0], {*lo, *hi});
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), row.number);
    }
  }
  return history;
}

AttackPlan build_attack_plan(std::string_view sensor, const AttackStrategy& strategy, const SensorHistory* history) {
  AttackPlan plan{std::string(sensor), strategy, 0.0};
  if (strategy.kind == AttackStrategy::Kind::Constant) {
    if (!std::isfinite(strategy.constant_value)) {
      throw Error(Errc::invalid_argument, "constant attack value must be finite");
    }
    plan.value = strategy.constant_value;
    return plan;
  }
  if (history == nullptr) {
    throw Error(Errc::invalid_argument,
                fmt::format("{} value attack needs a sensor history", strategy_name(strategy.kind)));
  }
  const auto* range = history->find(sensor);
  if (range == nullptr) throw Error(Errc::unknown_node, fmt::format("sensor '{}' has no history record", sensor));
  plan.value = strategy.kind == AttackStrategy::Kind::Minimum ? range->min : range->max;
  return plan;
}

}  // namespace ccl
