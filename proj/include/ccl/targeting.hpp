#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ccl/graph.hpp"
#include "ccl/postprocess.hpp"

namespace ccl {

struct TargetSet {
  std::map<std::string, std::size_t, std::less<>> scores;  // occurrences across non-empty R_i
  IdSet targets;                                           // all sensors sharing the top score
  std::size_t top_score = 0;
};

/// Throws Errc::invalid_argument on an empty list, Errc::no_targets when every R_i is empty.
TargetSet select_target_set(std::span<const SensorResult> results);

/// Uniform, seeded pick from `targets`. The draw uses the first output of
/// std::mt19937_64(seed) with rejection sampling, which the standard pins
/// down bit-for-bit, so picks are stable across platforms and compilers.
std::string choose_single_target(const TargetSet& targets, std::uint64_t seed);

struct AttackStrategy {
  enum class Kind { Constant, Minimum, Maximum };

  static constexpr double kDefaultConstant = 127.0;

  Kind kind = Kind::Constant;
  double constant_value = kDefaultConstant;

  static AttackStrategy constant(double value = kDefaultConstant);
  static AttackStrategy minimum() noexcept { return {Kind::Minimum, kDefaultConstant}; }
  static AttackStrategy maximum() noexcept { return {Kind::Maximum, kDefaultConstant}; }
  /// "constant", "minimum"/"min", "maximum"/"max".
  static AttackStrategy parse(std::string_view name);

  bool needs_history() const noexcept { return kind != Kind::Constant; }
};

std::string_view strategy_name(AttackStrategy::Kind kind) noexcept;

struct ObservedRange {
  double min = 0.0;
  double max = 0.0;
};

/// Historic min/max readings per sensor.
class SensorHistory {
 public:
  void add(std::string sensor, ObservedRange range);
  const ObservedRange* find(std::string_view sensor) const;
  std::size_t size() const noexcept { return ranges_.size(); }

 private:
  std::map<std::string, ObservedRange, std::less<>> ranges_;
};

/// CSV with header `sensor,min,max`; `#` comment lines and blank lines are skipped.
SensorHistory parse_sensor_history(std::string_view csv);

struct AttackPlan {
  std::string sensor;
  AttackStrategy strategy;
  double value = 0.0;  // reported for the whole attack
};

AttackPlan build_attack_plan(std::string_view sensor, const AttackStrategy& strategy,
                             const SensorHistory* history = nullptr);

}  // namespace ccl
