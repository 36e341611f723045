#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccl/graph.hpp"

namespace ccl {

inline constexpr double kDefaultHorizonHours = 72.0;
inline constexpr std::size_t kDefaultNearOptimalCount = 3;

struct SdtRecord {
  std::string sensor;
  double sdt_hours = 0.0;

  friend bool operator==(const SdtRecord&, const SdtRecord&) = default;
};

/// Shutdown times of one experiment. A record at the horizon means "no shutdown".
class SdtTable {
 public:
  /// Validates records; values above the horizon are clamped to it.
  SdtTable(std::vector<SdtRecord> records, double horizon = kDefaultHorizonHours);

  std::span<const SdtRecord> records() const noexcept { return records_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return records_.size(); }

  bool shuts_down(const SdtRecord& record) const noexcept { return record.sdt_hours < horizon_; }
  const SdtRecord* find(std::string_view sensor) const noexcept;
  IdSet sensors() const;

 private:
  std::vector<SdtRecord> records_;
  double horizon_;
};

/// CSV with header `sensor,sdt_hours`; `#` comment lines and blank lines are skipped.
SdtTable parse_sdt_table(std::string_view csv, double horizon = kDefaultHorizonHours);

/// Inverse of parse_sdt_table; rows sorted by sensor id, three decimals.
std::string format_sdt_csv(const SdtTable& table);

struct Ranking {
  std::vector<SdtRecord> ordered;  // ascending SDT, ties by sensor id
  IdSet near_optimal;              // shutdown-causing sensors among the first k ranks

  /// The fastest shutdown-causing sensor, if any record shut the plant down.
  std::optional<std::string> optimal() const;
  /// 1-based position of `sensor` in `ordered`, or 0 when absent.
  std::size_t rank_of(std::string_view sensor) const;
};

Ranking rank_by_sdt(const SdtTable& table, std::size_t k = kDefaultNearOptimalCount);

struct RandomAttackerStats {
  double p_near_optimal = 0.0;
  double p_no_shutdown = 0.0;
  std::optional<double> avg_sdt_excl_no_shutdown;  // empty when nothing shut down
};

struct GuidedAttackerStats {
  double p_near_optimal = 0.0;
  double avg_sdt_over_targets = 0.0;  // no-shutdown members counted at the horizon
  bool includes_no_shutdown = false;
};

struct AttackerComparison {
  RandomAttackerStats random;
  GuidedAttackerStats guided;
  IdSet target_set;
  Ranking ranking;
};

AttackerComparison attacker_comparison(const SdtTable& table, const IdSet& targets,
                                       std::size_t k = kDefaultNearOptimalCount);

struct SdtSummary {
  double mean = 0.0;
  double sample_std = 0.0;
};

/// Per-sensor mean and sample standard deviation across experiments.
std::map<std::string, SdtSummary, std::less<>> summarize_experiments(std::span<const SdtTable> tables);

}  // namespace ccl
