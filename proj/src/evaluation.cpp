#include "ccl/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ccl/error.hpp"
#include "text.hpp"

namespace ccl {

SdtTable::SdtTable(std::vector<SdtRecord> records, double horizon) : records_(std::move(records)), horizon_(horizon) {
  if (!std::isfinite(horizon_) || horizon_ <= 0.0) {
    throw Error(Errc::invalid_argument, fmt::format("horizon must be positive, got {}", horizon_));
  }
  if (records_.empty()) throw Error(Errc::invalid_argument, "an SDT table needs at least one record");
  IdSet seen;
  for (auto& r : records_) {
    if (r.sensor.empty()) throw Error(Errc::bad_value, "empty sensor id");
    if (!std::isfinite(r.sdt_hours) || r.sdt_hours < 0.0) {
      throw Error(Errc::bad_value, fmt::format("sensor '{}': SDT must be a finite value >= 0", r.sensor));
    }
    if (!seen.insert(r.sensor).second) {
      throw Error(Errc::duplicate_record, fmt::format("sensor '{}' appears twice", r.sensor));
    }
    r.sdt_hours = std::min(r.sdt_hours, horizon_);
  }
}

const SdtRecord* SdtTable::find(std::string_view sensor) const noexcept {
  const auto it = std::find_if(records_.begin(), records_.end(), [&](const SdtRecord& r) { return r.sensor == sensor; });
  return it == records_.end() ? nullptr : &*it;
}

IdSet SdtTable::sensors() const {
  IdSet ids;
  for (const auto& r : records_) ids.insert(r.sensor);
  return ids;
}

SdtTable parse_sdt_table(std::string_view csv, double horizon) {
  const auto rows = text::csv_rows(csv);
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"sensor", "sdt_hours"}) {
    throw Error(Errc::syntax, "SDT CSV must start with header 'sensor,sdt_hours'", rows.empty() ? 1 : rows.front().number);
  }
  std::vector<SdtRecord> records;
  IdSet seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != 2 || row.fields[0].empty()) {
      throw Error(Errc::syntax, "expected 2 fields: sensor,sdt_hours", row.number);
    }
    const auto value = text::parse_double(row.fields[1]);
    if (!value) throw Error(Errc::syntax, fmt::format("'{}' is not a number", row.fields[1]), row.number);
    if (!std::isfinite(*value) || *value < 0.0) {
      throw Error(Errc::bad_value, fmt::format("negative or non-finite SDT '{}'", row.fields[1]), row.number);
    }
    if (!seen.insert(row.fields[0]).second) {
      throw Error(Errc::duplicate_record, fmt::format("sensor '{}' appears twice", row.fields[0]), row.number);
    }
    records.push_back({row.fields[0], *value});
  }
  if (records.empty()) throw Error(Errc::syntax, "SDT CSV has no records", rows.front().number);
  return SdtTable(std::move(records), horizon);
}

std::string format_sdt_csv(const SdtTable& table) {
  std::vector<SdtRecord> rows(table.records().begin(), table.records().end());
  std::sort(rows.begin(), rows.end(), [](const SdtRecord& a, const SdtRecord& b) { return a.sensor < b.sensor; });
  std::string out = "sensor,sdt_hours\n";
  for (const auto& r : rows) out += fmt::format("{},{:.3f}\n", r.sensor, r.sdt_hours);
  return out;
}

std::optional<std::string> Ranking::optimal() const {
  if (near_optimal.empty()) return std::nullopt;
  return ordered.front().sensor;
}

std::size_t Ranking::rank_of(std::string_view sensor) const {
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (ordered[i].sensor == sensor) return i + 1;
  }
  return 0;
}

Ranking rank_by_sdt(const SdtTable& table, std::size_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "near-optimal count must be >= 1");
  Ranking ranking;
  ranking.ordered.assign(table.records().begin(), table.records().end());
  std::sort(ranking.ordered.begin(), ranking.ordered.end(), [](const SdtRecord& a, const SdtRecord& b) {
    return a.sdt_hours != b.sdt_hours ? a.sdt_hours < b.sdt_hours : a.sensor < b.sensor;
  });
  // No-shutdown records sit at the horizon, the largest possible value, so they rank last.
  for (const auto& r : ranking.ordered) {
    if (ranking.near_optimal.size() == k || !table.shuts_down(r)) break;
    ranking.near_optimal.insert(r.sensor);
  }
  return ranking;
}

AttackerComparison attacker_comparison(const SdtTable& table, const IdSet& targets, std::size_t k) {
  if (targets.empty()) throw Error(Errc::invalid_argument, "guided attacker needs a non-empty target set");
  for (const auto& t : targets) {
    if (table.find(t) == nullptr) throw Error(Errc::unknown_node, fmt::format("target '{}' is not in the SDT table", t));
  }

  AttackerComparison cmp;
  cmp.target_set = targets;
  cmp.ranking = rank_by_sdt(table, k);

  const auto n = static_cast<double>(table.size());
  std::size_t no_shutdown = 0;
  double shutdown_sum = 0.0;
  for (const auto& r : table.records()) {
    if (table.shuts_down(r)) {
      shutdown_sum += r.sdt_hours;
    } else {
      ++no_shutdown;
    }
  }
  const auto shutdowns = table.size() - no_shutdown;
  cmp.random.p_near_optimal = static_cast<double>(cmp.ranking.near_optimal.size()) / n;
  cmp.random.p_no_shutdown = static_cast<double>(no_shutdown) / n;
  if (shutdowns > 0) cmp.random.avg_sdt_excl_no_shutdown = shutdown_sum / static_cast<double>(shutdowns);

  std::size_t hits = 0;
  double target_sum = 0.0;
  for (const auto& t : targets) {
    const auto* r = table.find(t);
    target_sum += r->sdt_hours;
    if (!table.shuts_down(*r)) cmp.guided.includes_no_shutdown = true;
    if (cmp.ranking.near_optimal.contains(t)) ++hits;
  }
  const auto m = static_cast<double>(targets.size());
  cmp.guided.p_near_optimal = static_cast<double>(hits) / m;
  cmp.guided.avg_sdt_over_targets = target_sum / m;
  return cmp;
}

std::map<std::string, SdtSummary, std::less<>> summarize_experiments(std::span<const SdtTable> tables) {
  if (tables.empty()) throw Error(Errc::invalid_argument, "nothing to summarize");
  const auto sensors = tables.front().sensors();
  for (const auto& t : tables) {
    if (t.sensors() != sensors) throw Error(Errc::invalid_argument, "experiments cover different sensor sets");
    if (t.horizon() != tables.front().horizon()) throw Error(Errc::invalid_argument, "experiments use different horizons");
  }
  const auto n = static_cast<double>(tables.size());
  std::map<std::string, SdtSummary, std::less<>> out;
  for (const auto& s : sensors) {
    double sum = 0.0;
    for (const auto& t : tables) sum += t.find(s)->sdt_hours;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : tables) {
      const double d = t.find(s)->sdt_hours - mean;
      ss += d * d;
    }
    out[s] = {mean, tables.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
  }
  return out;
}

}  // namespace ccl
