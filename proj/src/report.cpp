#include "wsm/report.hpp"

#include <cmath>
#include <cstdio>

#include "wsm/error.hpp"

namespace wsm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::exact_pass: return "exact-pass";
    case Verdict::exact_fail: return "exact-fail";
    case Verdict::trend_consistent: return "trend-consistent";
    case Verdict::trend_inconsistent: return "trend-inconsistent";
    case Verdict::reported_only: return "reported-only";
  }
  return "reported-only";
}

Cell Cell::exact(const GaussRational& v) {
  Cell c;
  c.kind = Kind::exact;
  c.text = v.str();
  return c;
}

Cell Cell::number(double v) {
  Cell c;
  if (!std::isfinite(v)) return c;
  c.kind = Kind::real;
  c.real = v == 0.0 ? 0.0 : v;  // no negative zero in output
  return c;
}

Cell Cell::count(std::int64_t v) {
  Cell c;
  c.kind = Kind::integer;
  c.integer = v;
  return c;
}

Cell Cell::label(std::string v) {
  Cell c;
  c.kind = Kind::text;
  c.text = std::move(v);
  return c;
}

Cell Cell::boolean(bool v) {
  Cell c;
  c.kind = Kind::flag;
  c.flag = v;
  return c;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw Error(ErrorCode::dimension_mismatch, "table " + name + ": row width does not match columns");
  rows.push_back(std::move(row));
}

bool Report::has_exact_fail() const {
  for (const auto& v : verdicts)
    if (v.verdict == Verdict::exact_fail) return true;
  return false;
}

const Table& Report::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw Error(ErrorCode::invalid_argument, "no table named " + name);
}

const VerdictRecord& Report::verdict(const std::string& check) const {
  for (const auto& v : verdicts)
    if (v.check == check) return v;
  throw Error(ErrorCode::invalid_argument, "no verdict named " + check);
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::null: return nullptr;
    case Cell::Kind::exact:
    case Cell::Kind::text: return c.text;
    case Cell::Kind::real: return c.real;
    case Cell::Kind::integer: return c.integer;
    case Cell::Kind::flag: return c.flag;
  }
  return nullptr;
}

std::string cell_csv(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::null: return "";
    case Cell::Kind::exact: return c.text;
    case Cell::Kind::text: {
      if (c.text.find_first_of(",\"\n") == std::string::npos) return c.text;
      std::string out = "\"";
      for (char ch : c.text) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
    case Cell::Kind::real: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", c.real);
      return buf;
    }
    case Cell::Kind::integer: return std::to_string(c.integer);
    case Cell::Kind::flag: return c.flag ? "true" : "false";
  }
  return "";
}

}  // namespace

nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) j["columns"].push_back({{"name", c.name}, {"tier", c.tier}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  return j;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["params"] = r.params;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) j["tables"].push_back(to_json(t));
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts)
    j["verdicts"].push_back({{"check", v.check}, {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
  return j;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i].name;
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_csv(row[i]);
    out += "\n";
  }
  return out;
}

}  // namespace wsm
