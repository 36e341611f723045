#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccl/analysis.hpp"
#include "ccl/error.hpp"
#include "ccl/evaluation.hpp"
#include "ccl/graph.hpp"
#include "ccl/toyplant.hpp"

namespace ccl::cli {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

// Plant files embed a full graph, so either format can feed graph analysis.
CclGraph load_graph(const std::string& path, std::istream& in) {
  const auto text = read_input(path, in);
  if (path.ends_with(".plant")) return parse_plant(text).graph;
  return parse_graph(text);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

std::string join(const IdSet& ids, std::string_view sep = ",") {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

std::string join_or_none(const IdSet& ids) { return ids.empty() ? "(none)" : join(ids, " "); }

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct AnalysisFlags {
  std::string patterns = "cwe-1108,cwe-1109";
  std::string tau_mode = "mean+std";
  std::size_t min_in = 2;
  std::size_t min_depth = 3;

  void attach(CLI::App& cmd) {
    cmd.add_option("--patterns", patterns, "Comma-separated patterns: cwe-1108,cwe-1109,cwe-1047,cwe-1124")
        ->capture_default_str();
    cmd.add_option("--tau-mode", tau_mode, "Global-variable threshold: mean+std or fixed:<v>")->capture_default_str();
    cmd.add_option("--min-in", min_in, "Multi-purpose variable in-degree threshold")->capture_default_str();
    cmd.add_option("--min-depth", min_depth, "Deep-nesting function depth threshold")->capture_default_str();
  }

  AnalysisOptions options() const {
    AnalysisOptions o;
    o.patterns.clear();
    for (const auto& name : split_list(patterns)) {
      const auto id = pattern_from_name(name);
      if (!id) throw Error(Errc::invalid_argument, fmt::format("unknown pattern '{}'", name));
      if (std::find(o.patterns.begin(), o.patterns.end(), *id) == o.patterns.end()) o.patterns.push_back(*id);
    }
    o.tau = TauPolicy::parse(tau_mode);
    o.min_in = min_in;
    o.min_depth = min_depth;
    return o;
  }
};

struct StrategyFlags {
  std::string strategy = "constant";
  std::optional<double> value;
  std::string history_path;

  void attach(CLI::App& cmd) {
    cmd.add_option("--strategy", strategy, "constant | minimum | maximum")->capture_default_str();
    cmd.add_option("--value", value, "Value for the constant strategy (default 127)");
    cmd.add_option("--history", history_path, "CSV sensor,min,max used by minimum/maximum");
  }

  AttackStrategy parsed() const {
    auto s = AttackStrategy::parse(strategy);
    if (value) {
      if (!s.needs_history()) {
        s = AttackStrategy::constant(*value);
      } else {
        throw Error(Errc::invalid_argument, "--value only applies to the constant strategy");
      }
    }
    if (s.needs_history() && history_path.empty()) {
      throw CLI::ValidationError("--history", fmt::format("the {} strategy requires --history", strategy));
    }
    return s;
  }

  std::optional<SensorHistory> history(std::istream& in) const {
    if (history_path.empty()) return std::nullopt;
    return parse_sensor_history(read_input(history_path, in));
  }
};

std::string fmt_num(double v) { return fmt::format("{:.4f}", v); }

// Counts such as min_in print without decimals.
std::string fmt_param(double v) {
  return v == std::floor(v) && std::abs(v) < 1e15 ? fmt::format("{:.0f}", v) : fmt_num(v);
}

int write_analysis(const AnalysisReport& report, const CclGraph& graph, const std::string& source,
                   const std::string& format, std::ostream& out) {
  if (format == "csv") {
    fmt::print(out, "record,pattern,key,value\n");
    for (const auto& p : report.patterns) {
      const auto name = cwe_name(p.matched.pattern);
      for (const auto& [k, v] : p.matched.parameters) fmt::print(out, "param,{},{},{}\n", name, k, fmt_param(v));
      for (const auto& id : p.matched.matched) fmt::print(out, "matched,{},{},\n", name, id);
      for (const auto& id : p.sensors.sensors) fmt::print(out, "sensor,{},{},\n", name, id);
    }
    if (report.targets) {
      for (const auto& [id, score] : report.targets->scores) fmt::print(out, "score,,{},{}\n", id, score);
      for (const auto& id : report.targets->targets) fmt::print(out, "target,,{},\n", id);
    }
    for (const auto& w : report.warnings) fmt::print(out, "warning,,,{}\n", csv_quote(w));
  } else {
    fmt::print(out, "graph: {} ({} nodes, {} edges, {} sensors)\n", source, graph.node_count(), graph.edge_count(),
               report.sensor_count);
    for (const auto& p : report.patterns) {
      std::string params;
      for (const auto& [k, v] : p.matched.parameters) params += fmt::format(" {}={}", k, fmt_param(v));
      fmt::print(out, "{}{}\n", cwe_name(p.matched.pattern), params);
      fmt::print(out, "  matched: {}\n", join_or_none(p.matched.matched));
      fmt::print(out, "  sensors: {}\n", join_or_none(p.sensors.sensors));
    }
    if (report.targets) {
      std::string scores;
      for (const auto& [id, score] : report.targets->scores) scores += fmt::format(" {}={}", id, score);
      fmt::print(out, "scores:{}\n", scores);
      fmt::print(out, "targets: {}\n", join(report.targets->targets, " "));
    } else {
      fmt::print(out, "targets: (none)\n");
    }
    for (const auto& w : report.warnings) fmt::print(out, "warning: {}\n", w);
  }
  return report.targets ? kExitOk : kExitNoTargets;
}

void write_comparison(const AttackerComparison& cmp, const SdtTable& table, const std::string& format,
                      std::ostream& out) {
  const auto& r = cmp.random;
  const auto& g = cmp.guided;
  if (format == "csv") {
    fmt::print(out, "rank,sensor,sdt_hours,shutdown,near_optimal,target\n");
    for (std::size_t i = 0; i < cmp.ranking.ordered.size(); ++i) {
      const auto& rec = cmp.ranking.ordered[i];
      fmt::print(out, "{},{},{:.3f},{},{},{}\n", i + 1, rec.sensor, rec.sdt_hours, table.shuts_down(rec) ? 1 : 0,
                 cmp.ranking.near_optimal.contains(rec.sensor) ? 1 : 0, cmp.target_set.contains(rec.sensor) ? 1 : 0);
    }
    fmt::print(out, "\nmetric,value\n");
    fmt::print(out, "optimal_target,{}\n", cmp.ranking.optimal().value_or(""));
    fmt::print(out, "near_optimal,{}\n", csv_quote(join(cmp.ranking.near_optimal)));
    fmt::print(out, "targets,{}\n", csv_quote(join(cmp.target_set)));
    fmt::print(out, "random_p_near_optimal,{}\n", fmt_num(r.p_near_optimal));
    fmt::print(out, "random_p_no_shutdown,{}\n", fmt_num(r.p_no_shutdown));
    fmt::print(out, "random_avg_sdt_excl_no_shutdown,{}\n",
               r.avg_sdt_excl_no_shutdown ? fmt_num(*r.avg_sdt_excl_no_shutdown) : std::string());
    fmt::print(out, "guided_p_near_optimal,{}\n", fmt_num(g.p_near_optimal));
    fmt::print(out, "guided_avg_sdt,{}\n", fmt_num(g.avg_sdt_over_targets));
    fmt::print(out, "guided_includes_no_shutdown,{}\n", g.includes_no_shutdown ? 1 : 0);
    return;
  }
  fmt::print(out, "{:>4}  {:<12} {:>10}\n", "rank", "sensor", "sdt_hours");
  for (std::size_t i = 0; i < cmp.ranking.ordered.size(); ++i) {
    const auto& rec = cmp.ranking.ordered[i];
    std::string notes;
    if (cmp.ranking.near_optimal.contains(rec.sensor)) notes += " near-optimal";
    if (cmp.target_set.contains(rec.sensor)) notes += " target";
    if (!table.shuts_down(rec)) notes += " no-shutdown";
    fmt::print(out, "{:>4}  {:<12} {:>10.3f}{}\n", i + 1, rec.sensor, rec.sdt_hours, notes);
  }
  fmt::print(out, "optimal target: {}\n", cmp.ranking.optimal().value_or("(none)"));
  fmt::print(out, "near-optimal: {}\n", join_or_none(cmp.ranking.near_optimal));
  fmt::print(out, "random attacker: p(near-optimal)={} p(no shutdown)={} avg SDT over shutdowns={}\n",
             fmt_num(r.p_near_optimal), fmt_num(r.p_no_shutdown),
             r.avg_sdt_excl_no_shutdown ? fmt_num(*r.avg_sdt_excl_no_shutdown) + " h" : std::string("n/a"));
  fmt::print(out, "guided attacker: targets={{{}}} p(near-optimal)={} avg SDT={} h{}\n", join(cmp.target_set),
             fmt_num(g.p_near_optimal), fmt_num(g.avg_sdt_over_targets),
             g.includes_no_shutdown ? " (includes no-shutdown targets counted at the horizon)" : "");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-control-loop graph analysis: weakness patterns, single-shot target selection, SDT evaluation"};
  app.name("ccl");
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "text | csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  };

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Run pattern matching and target selection on a graph");
  std::string analyze_path;
  AnalysisFlags analyze_flags;
  analyze_cmd->add_option("graph", analyze_path, "Graph (.ccl) or plant (.plant) file, '-' for stdin")->required();
  analyze_flags.attach(*analyze_cmd);
  add_format(analyze_cmd);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Pick one target and build the attack plan");
  std::string plan_path;
  AnalysisFlags plan_flags;
  StrategyFlags plan_strategy;
  std::uint64_t seed = 0;
  plan_cmd->add_option("graph", plan_path, "Graph (.ccl) or plant (.plant) file")->required();
  plan_flags.attach(*plan_cmd);
  plan_strategy.attach(*plan_cmd);
  plan_cmd->add_option("--seed", seed, "Seed for the target draw")->capture_default_str();
  add_format(plan_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Rank an SDT table and compare random and guided attackers");
  std::string eval_path;
  std::string targets_arg;
  std::string from_graph;
  AnalysisFlags eval_flags;
  std::size_t top = kDefaultNearOptimalCount;
  double eval_horizon = kDefaultHorizonHours;
  eval_cmd->add_option("sdt", eval_path, "CSV with header sensor,sdt_hours ('-' for stdin)")->required();
  auto* targets_opt = eval_cmd->add_option("--targets", targets_arg, "Comma-separated guided target set");
  auto* graph_opt = eval_cmd->add_option("--from-graph", from_graph, "Compute the target set from this graph/plant");
  targets_opt->excludes(graph_opt);
  eval_flags.attach(*eval_cmd);
  eval_cmd->add_option("--top", top, "Near-optimal rank count")->check(CLI::PositiveNumber)->capture_default_str();
  eval_cmd->add_option("--horizon", eval_horizon, "Hours; SDT at or above it means no shutdown")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_format(eval_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run the toy plant, optionally attacking one or all sensors");
  std::string plant_path;
  std::string attack_sensor;
  bool all = false;
  StrategyFlags sim_strategy;
  SimConfig sim_config;
  sim_cmd->add_option("plant", plant_path, "Plant file")->required();
  auto* sensor_opt = sim_cmd->add_option("--attack-sensor", attack_sensor, "Attack this sensor");
  auto* all_flag = sim_cmd->add_flag("--all", all, "Attack every sensor in turn and print an SDT CSV");
  sensor_opt->excludes(all_flag);
  sim_strategy.attach(*sim_cmd);
  sim_cmd->add_option("--step", sim_config.step_hours, "Integration step in hours")->capture_default_str();
  sim_cmd->add_option("--horizon", sim_config.horizon_hours, "Simulated hours")->capture_default_str();
  sim_cmd->add_option("--attack-start", sim_config.attack_start_hours, "Attack start in hours")->capture_default_str();
  add_format(sim_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (analyze_cmd->parsed()) {
      const auto graph = load_graph(analyze_path, in);
      const auto report = analyze(graph, analyze_flags.options());
      return write_analysis(report, graph, analyze_path, format, out);
    }

    if (plan_cmd->parsed()) {
      const auto strategy = plan_strategy.parsed();
      const auto history = plan_strategy.history(in);
      const auto graph = load_graph(plan_path, in);
      const auto report = analyze(graph, plan_flags.options());
      if (!report.targets) {
        for (const auto& w : report.warnings) fmt::print(err, "warning: {}\n", w);
        fmt::print(err, "ccl: no target sensor found in '{}'\n", plan_path);
        return kExitNoTargets;
      }
      const auto sensor = choose_single_target(*report.targets, seed);
      const auto plan = build_attack_plan(sensor, strategy, history ? &*history : nullptr);
      if (format == "csv") {
        fmt::print(out, "sensor,strategy,value,seed,targets\n{},{},{},{},{}\n", plan.sensor,
                   strategy_name(plan.strategy.kind), plan.value, seed, csv_quote(join(report.targets->targets)));
      } else {
        fmt::print(out, "sensor: {}\nstrategy: {}\nvalue: {}\ntargets: {} (seed {})\n", plan.sensor,
                   strategy_name(plan.strategy.kind), plan.value, join(report.targets->targets, " "), seed);
      }
      return kExitOk;
    }

    if (eval_cmd->parsed()) {
      const auto table = parse_sdt_table(read_input(eval_path, in), eval_horizon);
      IdSet targets;
      if (!targets_arg.empty()) {
        for (auto& t : split_list(targets_arg)) targets.insert(std::move(t));
      } else if (!from_graph.empty()) {
        const auto graph = load_graph(from_graph, in);
        const auto report = analyze(graph, eval_flags.options());
        for (const auto& w : report.warnings) fmt::print(err, "warning: {}\n", w);
        if (report.targets) {
          targets = report.targets->targets;
        } else {
          // Without any matched weakness the guided attacker is no better informed than a random one.
          fmt::print(err, "warning: falling back to every sensor of the graph as the target set\n");
          for (auto& s : graph.ids_of_kind(NodeKind::Sensor)) targets.insert(std::move(s));
        }
      } else {
        throw CLI::ValidationError("eval", "one of --targets or --from-graph is required");
      }
      const auto cmp = attacker_comparison(table, targets, top);
      if (cmp.guided.includes_no_shutdown) {
        fmt::print(err, "warning: target set includes sensors that caused no shutdown\n");
      }
      write_comparison(cmp, table, format, out);
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      const auto plant = parse_plant(read_input(plant_path, in));
      const auto strategy = sim_strategy.parsed();
      const auto history = sim_strategy.history(in);
      const auto* hist = history ? &*history : nullptr;
      if (all) {
        fmt::print(out, "{}", format_sdt_csv(brute_force_rank(plant, strategy, hist, sim_config)));
        return kExitOk;
      }
      std::optional<AttackPlan> plan;
      if (!attack_sensor.empty()) plan = build_attack_plan(attack_sensor, strategy, hist);
      const auto outcome = simulate_attack(plant, plan, sim_config);
      if (format == "csv") {
        fmt::print(out, "shutdown,sdt_hours,violating_sensor,steps\n{},{:.3f},{},{}\n", outcome.shutdown ? 1 : 0,
                   outcome.sdt_hours, outcome.violating_sensor.value_or(""), outcome.trace_length);
      } else if (outcome.shutdown) {
        fmt::print(out, "shutdown after {:.3f} h: sensor {} left its bounds ({} steps)\n", outcome.sdt_hours,
                   *outcome.violating_sensor, outcome.trace_length);
      } else {
        fmt::print(out, "no shutdown within {:.3f} h ({} steps)\n", outcome.sdt_hours, outcome.trace_length);
      }
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  } catch (const Error& e) {
    fmt::print(err, "ccl: {}: {}\n", errc_name(e.code()), e.what());
    return e.code() == Errc::no_targets ? kExitNoTargets : kExitInputError;
  } catch (const std::exception& e) {
    fmt::print(err, "ccl: {}\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace ccl::cli
