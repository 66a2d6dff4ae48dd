#pragma once

#include "qroute/engine.hpp"
#include "qroute/exporters.hpp"
#include "qroute/qlearning.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qroute::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;        // usage, schema, or I/O error
inline constexpr int exit_convergence = 2;  // some pair failed extraction
inline constexpr int exit_verification = 3; // learned cost above optimal

// Hyperparameter and reward-model settings assembled from an optional JSON
// config document plus command-line overrides (flags win).
struct RunConfig {
  Hyperparams hp;
  RewardModel model;
};

RunConfig load_run_config(const std::string& config_path_or_empty);
std::string render_run_config(const RunConfig& cfg);  // JSON, printed by --show-config

struct SolveOptions {
  std::string topology_path;
  std::string telemetry_path;
  std::string solver = "q";  // "q" | "oracle"
  ExportFormat format = ExportFormat::structured;
  std::string output_path;   // empty: stdout
  std::string config_path;
  bool show_config = false;
  RunConfig config;
};

struct OracleOptions {
  std::string topology_path;
  std::string telemetry_path;
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  bool all = false;
  std::string verify_path;  // route-table file to verify, empty: none
  std::string config_path;
  RunConfig config;
};

struct ReportOptions {
  std::string table_path;
  std::vector<std::pair<NodeId, NodeId>> pairs;  // empty: all
  std::optional<NodeId> src_filter;
  std::optional<NodeId> dst_filter;
};

struct ReplayOptions {
  std::string topology_path;
  std::string telemetry_path;
  std::string events_path;
  std::string solver = "q";
  double batch_window = 0.0;
  bool warm_start = false;
  std::string diff_log_path;  // empty: none
  std::string config_path;
  RunConfig config;
};

int cmd_validate(const std::string& topology_path, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err);
int cmd_diff(const std::string& table_a_path, const std::string& table_b_path, std::ostream& out,
             std::ostream& err);
int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qroute::cli
