#include "gvlab/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace gvlab {

std::string format_double(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void escape_into(std::ostringstream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      default: os << c;
    }
  }
  os << '"';
}

}  // namespace

std::string to_json(const RunReport& rep) {
  std::ostringstream os;
  os << "{\n  \"scenario\": ";
  escape_into(os, rep.scenario);
  os << ",\n  \"grid\": [" << rep.grid[0] << ", " << rep.grid[1] << ", "
     << rep.grid[2] << "]";
  os << ",\n  \"tol_scale\": " << format_double(rep.tol_scale);
  os << ",\n  \"dt\": " << format_double(rep.dt);
  if (rep.timestamp) {
    os << ",\n  \"timestamp\": ";
    escape_into(os, *rep.timestamp);
  }
  os << ",\n  \"checks\": [";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const CheckResult& c = rep.checks[i];
    os << (i ? ",\n" : "\n") << "    {\"name\": ";
    escape_into(os, c.name);
    os << ", \"values\": {";
    for (std::size_t j = 0; j < c.values.size(); ++j) {
      os << (j ? ", " : "");
      escape_into(os, c.values[j].first);
      os << ": " << format_double(c.values[j].second);
    }
    os << "}, \"tolerance\": " << format_double(c.tolerance)
       << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
  }
  os << "\n  ],\n  \"all_pass\": " << (rep.all_pass ? "true" : "false")
     << "\n}\n";
  return os.str();
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "scenario,check,axis";
  if (!table.rows.empty())
    for (const auto& kv : table.rows.front().values) os << ',' << kv.first;
  os << ",observed_order\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const SweepRow& r = table.rows[i];
    os << table.scenario << ',' << table.check << ','
       << format_double(r.axis_value);
    for (const auto& kv : r.values) os << ',' << format_double(kv.second);
    if (i == 0 || i > table.observed_orders.size())
      os << ',';
    else
      os << ',' << format_double(table.observed_orders[i - 1]);
    os << '\n';
  }
  return os.str();
}

}  // namespace gvlab
