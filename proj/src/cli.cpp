#include "qroute/cli.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qroute::cli {

namespace {

using nlohmann::json;

SolverKind solver_from_string(const std::string& s) {
  if (s == "q") return SolverKind::qlearning;
  if (s == "oracle") return SolverKind::oracle;
  throw std::invalid_argument("unknown solver '" + s + "' (expected q or oracle)");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end())
      throw std::runtime_error(where + ": unknown key '" + key + "'");
  }
}

Scalar number_at(const json& obj, const char* key, Scalar fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw std::runtime_error(where + ": " + key + " must be a number");
  return obj[key].get<Scalar>();
}

void load_hyperparams(const json& obj, Hyperparams& hp) {
  reject_unknown_keys(obj,
                      {"alpha", "gamma", "epsilon_start", "epsilon_end", "epsilon_decay",
                       "episodes", "max_steps_per_episode", "seed"},
                      "config: hyperparams");
  hp.alpha = number_at(obj, "alpha", hp.alpha, "config: hyperparams");
  hp.gamma = number_at(obj, "gamma", hp.gamma, "config: hyperparams");
  hp.epsilon_start = number_at(obj, "epsilon_start", hp.epsilon_start, "config: hyperparams");
  hp.epsilon_end = number_at(obj, "epsilon_end", hp.epsilon_end, "config: hyperparams");
  hp.epsilon_decay = number_at(obj, "epsilon_decay", hp.epsilon_decay, "config: hyperparams");
  if (obj.contains("episodes")) {
    if (!obj["episodes"].is_number_integer())
      throw std::runtime_error("config: hyperparams: episodes must be an integer");
    hp.episodes = obj["episodes"].get<int>();
  }
  if (obj.contains("max_steps_per_episode")) {
    if (!obj["max_steps_per_episode"].is_number_integer())
      throw std::runtime_error("config: hyperparams: max_steps_per_episode must be an integer");
    hp.max_steps_per_episode = obj["max_steps_per_episode"].get<int>();
  }
  if (obj.contains("seed")) {
    if (!obj["seed"].is_number_integer())
      throw std::runtime_error("config: hyperparams: seed must be an integer");
    hp.seed = obj["seed"].get<std::uint64_t>();
  }
}

void load_reward_model(const json& obj, RewardModel& model) {
  reject_unknown_keys(
      obj, {"propagation_us_per_km", "service_time_us", "ber_tiers", "fallthrough_penalty_us"},
      "config: reward_model");
  model.propagation_us_per_km =
      number_at(obj, "propagation_us_per_km", model.propagation_us_per_km, "config: reward_model");
  model.service_time_us =
      number_at(obj, "service_time_us", model.service_time_us, "config: reward_model");
  model.fallthrough_penalty_us = number_at(obj, "fallthrough_penalty_us",
                                           model.fallthrough_penalty_us, "config: reward_model");
  if (obj.contains("ber_tiers")) {
    if (!obj["ber_tiers"].is_array())
      throw std::runtime_error("config: reward_model: ber_tiers must be an array");
    model.ber_tiers.clear();
    for (const json& jt : obj["ber_tiers"]) {
      if (!jt.is_object() || !jt.contains("threshold") || !jt.contains("penalty_us") ||
          !jt["threshold"].is_number() || !jt["penalty_us"].is_number())
        throw std::runtime_error(
            "config: reward_model: each tier needs numeric threshold and penalty_us");
      reject_unknown_keys(jt, {"threshold", "penalty_us"}, "config: reward_model: ber_tiers");
      model.ber_tiers.push_back({jt["threshold"].get<Scalar>(), jt["penalty_us"].get<Scalar>()});
    }
  }
}

// One report/oracle output line per pair.
void print_pair_line(std::ostream& out, NodeId src, NodeId dst, const Route& r) {
  out << src << "->" << dst << ": ";
  if (r.status == RouteStatus::ok)
    out << render_path(r.path) << "  " << format_reward(r.total_reward) << "\n";
  else
    out << to_string(r.status) << "\n";
}

bool any_no_convergence(const RouteTable& table) {
  for (const auto& [pair, r] : table.routes)
    if (r.status == RouteStatus::no_convergence) return true;
  return false;
}

RouteTable solve_table(const Topology& topology, const TelemetrySnapshot& snap,
                       const RunConfig& cfg, SolverKind kind) {
  if (kind == SolverKind::oracle)
    return solve_all_shortest(make_weighted_view(topology, snap, cfg.model), snap.timestamp());
  RewardMatrix rewards = build_reward_matrix(topology, snap, cfg.model);
  return solve_all(topology, rewards, cfg.hp, snap.timestamp());
}

}  // namespace

RunConfig load_run_config(const std::string& config_path_or_empty) {
  RunConfig cfg;
  if (config_path_or_empty.empty()) return cfg;

  std::ifstream in(config_path_or_empty);
  if (!in) throw std::runtime_error("config: cannot open " + config_path_or_empty);
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("config: not valid JSON");
  if (!doc.is_object()) throw std::runtime_error("config: top level must be an object");
  reject_unknown_keys(doc, {"hyperparams", "reward_model"}, "config");
  if (doc.contains("hyperparams")) {
    if (!doc["hyperparams"].is_object())
      throw std::runtime_error("config: hyperparams must be an object");
    load_hyperparams(doc["hyperparams"], cfg.hp);
  }
  if (doc.contains("reward_model")) {
    if (!doc["reward_model"].is_object())
      throw std::runtime_error("config: reward_model must be an object");
    load_reward_model(doc["reward_model"], cfg.model);
  }
  return cfg;
}

std::string render_run_config(const RunConfig& cfg) {
  json tiers = json::array();
  for (const BerTier& t : cfg.model.ber_tiers)
    tiers.push_back(json{{"threshold", t.threshold}, {"penalty_us", t.penalty_us}});
  json doc{{"hyperparams",
            {{"alpha", cfg.hp.alpha},
             {"gamma", cfg.hp.gamma},
             {"epsilon_start", cfg.hp.epsilon_start},
             {"epsilon_end", cfg.hp.epsilon_end},
             {"epsilon_decay", cfg.hp.epsilon_decay},
             {"episodes", cfg.hp.episodes},
             {"max_steps_per_episode", cfg.hp.max_steps_per_episode},
             {"seed", cfg.hp.seed}}},
           {"reward_model",
            {{"propagation_us_per_km", cfg.model.propagation_us_per_km},
             {"service_time_us", cfg.model.service_time_us},
             {"ber_tiers", std::move(tiers)},
             {"fallthrough_penalty_us", cfg.model.fallthrough_penalty_us}}}};
  return doc.dump(2) + "\n";
}

int cmd_validate(const std::string& topology_path, std::ostream& out, std::ostream& err) {
  try {
    Topology t = load_topology_file(topology_path);
    auto components = t.connected_components();
    out << "topology OK: " << t.size() << " nodes, " << t.link_count() << " links, "
        << components.size() << (components.size() == 1 ? " component" : " components") << "\n";
    return exit_ok;
  } catch (const std::exception& e) {
    err << "validate: " << e.what() << "\n";
    return exit_usage;
  }
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.show_config) {
      out << render_run_config(opt.config);
      return exit_ok;
    }
    if (opt.topology_path.empty() || opt.telemetry_path.empty()) {
      err << "solve: topology and telemetry files are required\n";
      return exit_usage;
    }
    SolverKind kind = solver_from_string(opt.solver);
    Topology topology = load_topology_file(opt.topology_path);
    TelemetrySnapshot snap = load_telemetry_file(topology, opt.telemetry_path);
    RouteTable table = solve_table(topology, snap, opt.config, kind);

    std::string artifact = export_route_table(table, opt.format);
    if (opt.output_path.empty()) {
      out << artifact;
    } else {
      std::ofstream f(opt.output_path);
      if (!f) {
        err << "solve: cannot write " << opt.output_path << "\n";
        return exit_usage;
      }
      f << artifact;
    }
    return any_no_convergence(table) ? exit_convergence : exit_ok;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return exit_usage;
  }
}

int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    bool pair_mode = opt.src.has_value() || opt.dst.has_value();
    int modes = (pair_mode ? 1 : 0) + (opt.all ? 1 : 0) + (opt.verify_path.empty() ? 0 : 1);
    if (modes != 1) {
      err << "oracle: pick exactly one of --src/--dst, --all, --verify\n";
      return exit_usage;
    }
    if (pair_mode && (!opt.src || !opt.dst)) {
      err << "oracle: --src and --dst go together\n";
      return exit_usage;
    }
    Topology topology = load_topology_file(opt.topology_path);
    TelemetrySnapshot snap = load_telemetry_file(topology, opt.telemetry_path);
    WeightedView view = make_weighted_view(topology, snap, opt.config.model);

    if (pair_mode) {
      Route r = shortest_path(view, *opt.src, *opt.dst);
      print_pair_line(out, *opt.src, *opt.dst, r);
      return exit_ok;
    }
    if (opt.all) {
      RouteTable table = solve_all_shortest(view, snap.timestamp());
      for (const auto& [pair, r] : table.routes) print_pair_line(out, pair.first, pair.second, r);
      return exit_ok;
    }
    RouteTable table = import_route_table_file(opt.verify_path);
    VerificationReport report = verify_policy(table, view);
    print_verification_report(out, report);
    return report.ok() ? exit_ok : exit_verification;
  } catch (const std::exception& e) {
    err << "oracle: " << e.what() << "\n";
    return exit_usage;
  }
}

int cmd_diff(const std::string& table_a_path, const std::string& table_b_path, std::ostream& out,
             std::ostream& err) {
  try {
    RouteTable a = import_route_table_file(table_a_path);
    RouteTable b = import_route_table_file(table_b_path);
    print_policy_diff(out, diff_route_tables(a, b));
    return exit_ok;
  } catch (const std::exception& e) {
    err << "diff: " << e.what() << "\n";
    return exit_usage;
  }
}

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    RouteTable table = import_route_table_file(opt.table_path);
    if (!opt.pairs.empty()) {
      for (auto [src, dst] : opt.pairs) {
        if (src == dst) {
          if (std::find(table.nodes.begin(), table.nodes.end(), src) == table.nodes.end())
            throw std::runtime_error("report: node " + std::to_string(src) + " not in table");
          out << src << "->" << dst << ": " << src << "  0.00\n";
          continue;
        }
        const Route* r = table.find(src, dst);
        if (!r)
          throw std::runtime_error("report: pair " + std::to_string(src) + "->" +
                                   std::to_string(dst) + " not in table (" +
                                   std::to_string(table.routes.size()) + " pairs available)");
        print_pair_line(out, src, dst, *r);
      }
      return exit_ok;
    }
    bool printed = false;
    for (const auto& [pair, r] : table.routes) {
      if (opt.src_filter && pair.first != *opt.src_filter) continue;
      if (opt.dst_filter && pair.second != *opt.dst_filter) continue;
      print_pair_line(out, pair.first, pair.second, r);
      printed = true;
    }
    if (!printed && (opt.src_filter || opt.dst_filter))
      throw std::runtime_error("report: no matching pairs (" +
                               std::to_string(table.routes.size()) + " pairs available)");
    return exit_ok;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_usage;
  }
}

int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    SolverKind kind = solver_from_string(opt.solver);
    Topology topology = load_topology_file(opt.topology_path);
    TelemetrySnapshot snap = load_telemetry_file(topology, opt.telemetry_path);
    std::vector<TelemetryEvent> events = load_event_stream_file(opt.events_path);

    Engine engine(std::move(topology), std::move(snap), opt.config.model, kind, opt.config.hp,
                  opt.warm_start);
    out << "initial policy: " << engine.route_table().routes.size() << " pairs at t="
        << format_reward(engine.route_table().snapshot_time) << "\n";

    ReplayResult result = engine.replay(events, opt.batch_window);
    for (const PolicyDiff& diff : result.diffs) print_policy_diff(out, diff);
    out << "applied " << result.events_applied << "/" << events.size() << " events\n";

    if (!opt.diff_log_path.empty()) {
      std::ofstream log(opt.diff_log_path);
      if (!log) {
        err << "replay: cannot write " << opt.diff_log_path << "\n";
        return exit_usage;
      }
      for (const PolicyDiff& diff : result.diffs) log << diff_to_json_line(diff) << "\n";
    }
    if (result.aborted) {
      err << "replay: aborted: " << result.error << "\n";
      return exit_usage;
    }
    return any_no_convergence(engine.route_table()) ? exit_convergence : exit_ok;
  } catch (const std::exception& e) {
    err << "replay: " << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace qroute::cli
