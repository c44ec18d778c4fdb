#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsm/scalar.hpp"

namespace wsm {

enum class Verdict { exact_pass, exact_fail, trend_consistent, trend_inconsistent, reported_only };

std::string to_string(Verdict v);

// One table value. Exact values travel as strings ("a/b", "1/2+3i") so nothing
// is rounded on the way out; floats are doubles.
struct Cell {
  enum class Kind { null, exact, real, integer, text, flag };
  Kind kind = Kind::null;
  std::string text;
  double real = 0;
  std::int64_t integer = 0;
  bool flag = false;

  static Cell none() { return {}; }
  static Cell exact(const GaussRational& v);
  static Cell exact(const Rational& v) { return exact(GaussRational(v)); }
  static Cell number(double v);
  static Cell count(std::int64_t v);
  static Cell label(std::string v);
  static Cell boolean(bool v);
};

// Column tiers: "exact" for values computed in exact arithmetic (including
// integer indices), "float" for double-precision results, "meta" for labels.
struct Column {
  std::string name;
  std::string tier;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

struct VerdictRecord {
  std::string check;
  Verdict verdict = Verdict::reported_only;
  std::string detail;
};

struct Report {
  std::string scenario;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<Table> tables;
  std::vector<VerdictRecord> verdicts;

  [[nodiscard]] bool has_exact_fail() const;
  [[nodiscard]] const Table& table(const std::string& name) const;
  [[nodiscard]] const VerdictRecord& verdict(const std::string& check) const;
};

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::ordered_json to_json(const Table& t);
nlohmann::ordered_json to_json(const Report& r);
// Header line plus one line per row; floats with 17 significant digits.
std::string to_csv(const Table& t);

}  // namespace wsm
