#pragma once

#include "qroute/engine.hpp"
#include "qroute/route.hpp"

#include <iosfwd>
#include <string>

namespace qroute {

enum class ExportFormat { matrix_table, flat_csv, structured };

ExportFormat export_format_from_string(const std::string& s);

// Fixed two-decimal microsecond rendering, locale-independent ("-123.55").
std::string format_reward(Scalar reward_us);

// matrix_table: the full source x destination grid, one row per source in
//   ascending id order, cells " , "-separated dash-joined paths, "-" on the
//   diagonal, "x" unreachable, "?" non-converged.
// flat_csv: src,dst,path,total_reward,status with two-decimal rewards.
// structured: JSON that import_route_table reads back losslessly.
std::string export_route_table(const RouteTable& table, ExportFormat format);

RouteTable import_route_table(const std::string& structured_json);
RouteTable import_route_table_file(const std::string& path);

// One human-readable block per re-solve, entries as
//   "3->4: 3-4 (-30.00) => 3-2-1-4 (-100.00)".
void print_policy_diff(std::ostream& out, const PolicyDiff& diff);

// Machine-readable one-line JSON record of a diff.
std::string diff_to_json_line(const PolicyDiff& diff);

void print_verification_report(std::ostream& out, const VerificationReport& report);

}  // namespace qroute
