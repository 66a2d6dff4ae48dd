#include "qroute/exporters.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qroute {

namespace {

using nlohmann::json;

// Cell text for a route that has no usable path.
const char* placeholder(RouteStatus s) {
  return s == RouteStatus::unreachable ? "x" : "?";
}

std::string cell_text(const Route& r) {
  return r.status == RouteStatus::ok ? render_path(r.path) : placeholder(r.status);
}

json route_to_json(const Route& r) {
  return json{{"path", r.path}, {"total_reward", r.total_reward}, {"status", to_string(r.status)}};
}

Route route_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("path") || !j.contains("total_reward") ||
      !j.contains("status"))
    throw std::runtime_error(where + ": route needs path, total_reward, status");
  Route r;
  if (!j["path"].is_array()) throw std::runtime_error(where + ": path must be an array");
  for (const json& n : j["path"]) {
    if (!n.is_number_integer()) throw std::runtime_error(where + ": path nodes must be integers");
    r.path.push_back(n.get<NodeId>());
  }
  if (!j["total_reward"].is_number())
    throw std::runtime_error(where + ": total_reward must be a number");
  r.total_reward = j["total_reward"].get<Scalar>();
  if (!j["status"].is_string()) throw std::runtime_error(where + ": status must be a string");
  r.status = route_status_from_string(j["status"].get<std::string>());
  return r;
}

}  // namespace

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "matrix-table") return ExportFormat::matrix_table;
  if (s == "flat-csv") return ExportFormat::flat_csv;
  if (s == "structured") return ExportFormat::structured;
  throw std::invalid_argument("unknown export format '" + s +
                              "' (expected matrix-table, flat-csv, or structured)");
}

std::string format_reward(Scalar reward_us) {
  if (std::isinf(reward_us)) return reward_us > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), reward_us, std::chars_format::fixed, 2);
  if (ec != std::errc()) throw std::runtime_error("format_reward: value does not fit");
  std::string s(buf, end);
  return s == "-0.00" ? "0.00" : s;
}

std::string export_route_table(const RouteTable& table, ExportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ExportFormat::matrix_table: {
      for (NodeId src : table.nodes) {
        bool first = true;
        for (NodeId dst : table.nodes) {
          if (!first) out << " , ";
          first = false;
          if (src == dst) {
            out << "-";
            continue;
          }
          const Route* r = table.find(src, dst);
          out << (r ? cell_text(*r) : "x");
        }
        out << "\n";
      }
      break;
    }
    case ExportFormat::flat_csv: {
      out << "src,dst,path,total_reward,status\n";
      for (const auto& [pair, r] : table.routes) {
        out << pair.first << "," << pair.second << ","
            << (r.status == RouteStatus::ok ? render_path(r.path) : "") << ","
            << format_reward(r.total_reward) << "," << to_string(r.status) << "\n";
      }
      break;
    }
    case ExportFormat::structured: {
      json routes = json::array();
      for (const auto& [pair, r] : table.routes) {
        json jr = route_to_json(r);
        jr["src"] = pair.first;
        jr["dst"] = pair.second;
        routes.push_back(std::move(jr));
      }
      json doc{{"nodes", table.nodes},
               {"snapshot_time", table.snapshot_time},
               {"routes", std::move(routes)}};
      out << doc.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

RouteTable import_route_table(const std::string& structured_json) {
  json doc = json::parse(structured_json, nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("route table: not valid JSON");
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("routes"))
    throw std::runtime_error("route table: needs nodes and routes");
  if (!doc["nodes"].is_array()) throw std::runtime_error("route table: nodes must be an array");

  RouteTable table;
  for (const json& n : doc["nodes"]) {
    if (!n.is_number_integer()) throw std::runtime_error("route table: nodes must be integers");
    table.nodes.push_back(n.get<NodeId>());
  }
  if (doc.contains("snapshot_time")) {
    if (!doc["snapshot_time"].is_number())
      throw std::runtime_error("route table: snapshot_time must be a number");
    table.snapshot_time = doc["snapshot_time"].get<double>();
  }
  if (!doc["routes"].is_array()) throw std::runtime_error("route table: routes must be an array");
  int i = 0;
  for (const json& jr : doc["routes"]) {
    std::string where = "route table: routes[" + std::to_string(i++) + "]";
    if (!jr.is_object() || !jr.contains("src") || !jr.contains("dst"))
      throw std::runtime_error(where + ": needs src and dst");
    if (!jr["src"].is_number_integer() || !jr["dst"].is_number_integer())
      throw std::runtime_error(where + ": src and dst must be integers");
    NodeId src = jr["src"].get<NodeId>();
    NodeId dst = jr["dst"].get<NodeId>();
    if (!table.routes.emplace(std::make_pair(src, dst), route_from_json(jr, where)).second)
      throw std::runtime_error(where + ": duplicate pair");
  }
  return table;
}

RouteTable import_route_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("route table: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_route_table(buf.str());
}

void print_policy_diff(std::ostream& out, const PolicyDiff& diff) {
  out << "t=" << format_reward(diff.time) << " changed=" << diff.changed
      << " unchanged=" << diff.unchanged << " newly-unreachable=" << diff.newly_unreachable
      << "\n";
  for (const PolicyDiffEntry& e : diff.entries) {
    out << "  " << e.src << "->" << e.dst << ": " << cell_text(e.before) << " ("
        << format_reward(e.before.total_reward) << ") => " << cell_text(e.after) << " ("
        << format_reward(e.after.total_reward) << ")\n";
  }
}

std::string diff_to_json_line(const PolicyDiff& diff) {
  json entries = json::array();
  for (const PolicyDiffEntry& e : diff.entries) {
    entries.push_back(json{{"src", e.src},
                           {"dst", e.dst},
                           {"before", route_to_json(e.before)},
                           {"after", route_to_json(e.after)}});
  }
  json doc{{"time", diff.time},
           {"changed", diff.changed},
           {"unchanged", diff.unchanged},
           {"newly_unreachable", diff.newly_unreachable},
           {"entries", std::move(entries)}};
  return doc.dump();
}

void print_verification_report(std::ostream& out, const VerificationReport& report) {
  out << "checked " << report.pairs_checked << " pairs: " << report.failures.size()
      << " failures, " << report.benign_ties.size() << " benign ties\n";
  for (const auto& e : report.failures)
    out << "  fail " << e.src << "->" << e.dst << ": learned " << format_reward(e.learned_cost)
        << " us, optimal " << format_reward(e.optimal_cost) << " us\n";
  for (const auto& e : report.benign_ties)
    out << "  tie  " << e.src << "->" << e.dst << ": equal cost " << format_reward(e.optimal_cost)
        << " us, different path\n";
}

}  // namespace qroute
