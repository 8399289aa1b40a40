#pragma once

// Machine-readable check records: every CLI command emits a JSON report of
// {check, params, lhs, rhs, margin, pass} rows plus the exact configuration
// it ran with. Reports carry no timestamps, so identical runs produce
// byte-identical files.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "covol/common.hpp"

namespace covol {

struct ReportRecord {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  nlohmann::json extra = nlohmann::json::object();
};

inline ReportRecord record_ge(std::string check, double value, double bound,
                              nlohmann::json params = nlohmann::json::object(),
                              double slack = 0.0) {
  ReportRecord r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.lhs = value;
  r.rhs = bound;
  r.margin = value - bound;
  r.pass = value >= bound - slack;
  return r;
}

inline ReportRecord record_le(std::string check, double value, double bound,
                              nlohmann::json params = nlohmann::json::object(),
                              double slack = 0.0) {
  ReportRecord r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.lhs = value;
  r.rhs = bound;
  r.margin = bound - value;
  r.pass = value <= bound + slack;
  return r;
}

struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<ReportRecord> records;

  bool all_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["command"] = command;
    out["config"] = config;
    out["all_pass"] = all_pass();
    out["records"] = nlohmann::json::array();
    for (const auto& r : records) {
      nlohmann::json j;
      j["check"] = r.check;
      j["params"] = r.params;
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      j["margin"] = r.margin;
      j["pass"] = r.pass;
      if (!r.extra.empty()) j["extra"] = r.extra;
      out["records"].push_back(std::move(j));
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), Errc::ParseError, "cannot write report to " + path);
    out << to_json().dump(2) << "\n";
  }
};

}  // namespace covol
