#include "qroute/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

qroute::NodeId parse_node(const std::string& s) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("'" + s + "' is not a node id");
  }
}

// Hyperparameter flags shared by solve and replay. Values only override the
// config document when the flag was actually given.
struct TuningFlags {
  qroute::Hyperparams v;
  CLI::Option* alpha = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* eps_start = nullptr;
  CLI::Option* eps_end = nullptr;
  CLI::Option* eps_decay = nullptr;
  CLI::Option* episodes = nullptr;
  CLI::Option* max_steps = nullptr;
  CLI::Option* seed = nullptr;

  void attach(CLI::App* cmd) {
    alpha = cmd->add_option("--alpha", v.alpha, "learning rate, (0,1]");
    gamma = cmd->add_option("--gamma", v.gamma, "discount factor, (0,1]");
    eps_start = cmd->add_option("--epsilon-start", v.epsilon_start, "initial exploration rate");
    eps_end = cmd->add_option("--epsilon-end", v.epsilon_end, "exploration floor");
    eps_decay = cmd->add_option("--epsilon-decay", v.epsilon_decay, "per-episode decay factor");
    episodes = cmd->add_option("--episodes", v.episodes, "training episodes per destination");
    max_steps = cmd->add_option("--max-steps", v.max_steps_per_episode,
                                "step budget per episode (0 = 4x node count)");
    seed = cmd->add_option("--seed", v.seed, "rng seed");
  }

  void apply(qroute::Hyperparams& hp) const {
    if (alpha->count()) hp.alpha = v.alpha;
    if (gamma->count()) hp.gamma = v.gamma;
    if (eps_start->count()) hp.epsilon_start = v.epsilon_start;
    if (eps_end->count()) hp.epsilon_end = v.epsilon_end;
    if (eps_decay->count()) hp.epsilon_decay = v.epsilon_decay;
    if (episodes->count()) hp.episodes = v.episodes;
    if (max_steps->count()) hp.max_steps_per_episode = v.max_steps_per_episode;
    if (seed->count()) hp.seed = v.seed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"routing-policy engine for packet-optical networks"};
  app.require_subcommand(1);

  std::string validate_topology;
  CLI::App* validate = app.add_subcommand("validate", "check a topology document");
  validate->add_option("topology", validate_topology, "topology JSON file")->required();

  qroute::cli::SolveOptions solve_opt;
  std::string solve_format = "structured";
  TuningFlags solve_hp;
  CLI::App* solve = app.add_subcommand("solve", "compute a route table and export it");
  solve->add_option("topology", solve_opt.topology_path, "topology JSON file");
  solve->add_option("telemetry", solve_opt.telemetry_path, "telemetry JSON file");
  solve->add_option("--solver", solve_opt.solver, "q | oracle")->capture_default_str();
  solve->add_option("--format", solve_format, "matrix-table | flat-csv | structured")
      ->capture_default_str();
  solve->add_option("-o,--output", solve_opt.output_path, "write the table here, not stdout");
  solve->add_option("--config", solve_opt.config_path, "JSON settings document");
  solve->add_flag("--show-config", solve_opt.show_config, "print effective settings and exit");
  solve_hp.attach(solve);

  qroute::cli::OracleOptions oracle_opt;
  CLI::App* oracle = app.add_subcommand("oracle", "exact shortest-penalty paths");
  oracle->add_option("topology", oracle_opt.topology_path, "topology JSON file")->required();
  oracle->add_option("telemetry", oracle_opt.telemetry_path, "telemetry JSON file")->required();
  oracle->add_option("--src", oracle_opt.src, "source node");
  oracle->add_option("--dst", oracle_opt.dst, "destination node");
  oracle->add_flag("--all", oracle_opt.all, "print every ordered pair");
  oracle->add_option("--verify", oracle_opt.verify_path, "route-table file to verify");
  oracle->add_option("--config", oracle_opt.config_path, "JSON settings document");

  std::string diff_a, diff_b;
  CLI::App* diff = app.add_subcommand("diff", "compare two structured route tables");
  diff->add_option("before", diff_a, "earlier route-table file")->required();
  diff->add_option("after", diff_b, "later route-table file")->required();

  qroute::cli::ReportOptions report_opt;
  std::vector<std::string> report_pairs;
  CLI::App* report = app.add_subcommand("report", "print per-pair paths and rewards");
  report->add_option("table", report_opt.table_path, "structured route-table file")->required();
  report->add_option("--pair", report_pairs, "SRC:DST, repeatable");
  report->add_option("--src", report_opt.src_filter, "only this source");
  report->add_option("--dst", report_opt.dst_filter, "only this destination");

  qroute::cli::ReplayOptions replay_opt;
  TuningFlags replay_hp;
  CLI::App* replay = app.add_subcommand("replay", "feed a telemetry event stream to the engine");
  replay->add_option("topology", replay_opt.topology_path, "topology JSON file")->required();
  replay->add_option("telemetry", replay_opt.telemetry_path, "initial telemetry JSON file")
      ->required();
  replay->add_option("events", replay_opt.events_path, "JSONL event stream")->required();
  replay->add_option("--solver", replay_opt.solver, "q | oracle")->capture_default_str();
  replay->add_option("--batch-window", replay_opt.batch_window,
                     "coalesce events within this window (seconds) into one re-solve");
  replay->add_flag("--warm-start", replay_opt.warm_start,
                   "seed each re-solve with the previous value tables");
  replay->add_option("--diff-log", replay_opt.diff_log_path, "write JSON diff records here");
  replay->add_option("--config", replay_opt.config_path, "JSON settings document");
  replay_hp.attach(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qroute::cli::exit_usage;
  }

  try {
    if (*validate) return qroute::cli::cmd_validate(validate_topology, std::cout, std::cerr);
    if (*solve) {
      solve_opt.config = qroute::cli::load_run_config(solve_opt.config_path);
      solve_hp.apply(solve_opt.config.hp);
      solve_opt.format = qroute::export_format_from_string(solve_format);
      return qroute::cli::cmd_solve(solve_opt, std::cout, std::cerr);
    }
    if (*oracle) {
      oracle_opt.config = qroute::cli::load_run_config(oracle_opt.config_path);
      return qroute::cli::cmd_oracle(oracle_opt, std::cout, std::cerr);
    }
    if (*diff) return qroute::cli::cmd_diff(diff_a, diff_b, std::cout, std::cerr);
    if (*report) {
      for (const std::string& s : report_pairs) {
        size_t colon = s.find(':');
        if (colon == std::string::npos)
          throw std::runtime_error("--pair wants SRC:DST, got '" + s + "'");
        report_opt.pairs.emplace_back(parse_node(s.substr(0, colon)),
                                      parse_node(s.substr(colon + 1)));
      }
      return qroute::cli::cmd_report(report_opt, std::cout, std::cerr);
    }
    if (*replay) {
      replay_opt.config = qroute::cli::load_run_config(replay_opt.config_path);
      replay_hp.apply(replay_opt.config.hp);
      return qroute::cli::cmd_replay(replay_opt, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "qroute: " << e.what() << "\n";
    return qroute::cli::exit_usage;
  }
  return qroute::cli::exit_usage;
}
