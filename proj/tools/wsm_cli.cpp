// Command-line front end. Talks to the library only through wsm.h.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wsm/wsm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExactFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::optional<std::string> space;
  std::optional<long long> m;
  std::vector<std::string> params;
  std::vector<std::string> ideal;
  std::vector<long long> weight;
  std::optional<long long> max_level;
  std::optional<long long> max_wlevel;
  std::vector<double> schatten;
  std::optional<std::string> poly;
  std::optional<std::string> module;
  std::optional<std::string> sign;
  std::optional<long long> jobs;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> config;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--space", o.space, "drury-arveson (da), hardy-ball, bergman-ball, polydisk-hardy");
  cmd->add_option("--m", o.m, "number of variables");
  cmd->add_option("--param", o.params, "space parameter k=v (repeatable)");
  cmd->add_option("--ideal", o.ideal, "ideal generators, comma-separated")->delimiter(',');
  cmd->add_option("--weight", o.weight, "weight vector n1,n2,...")->delimiter(',');
  cmd->add_option("--max-level", o.max_level, "truncation level K (degree bound D for preg)");
  cmd->add_option("--max-wlevel", o.max_wlevel, "weighted level bound");
  cmd->add_option("--schatten", o.schatten, "Schatten exponents p1,p2,...")->delimiter(',');
  cmd->add_option("--poly", o.poly, "positive regular polynomial");
  cmd->add_option("--module", o.module, "koszul module: full, ideal or quotient");
  cmd->add_option("--sign", o.sign, "preg delta sign convention: all-plus or printed");
  cmd->add_option("--jobs", o.jobs, "worker threads");
  cmd->add_option("--out", o.out, "output file (json) or directory (csv)");
  cmd->add_option("--format", o.format, "json or csv");
  cmd->add_option("--config", o.config, "JSON config file; flags override its values");
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
  return j;
}

nlohmann::json build_config(const std::string& command, const Options& o) {
  nlohmann::json c = o.config ? read_config_file(*o.config) : nlohmann::json::object();
  if (c.contains("command") && c["command"] != command)
    throw UsageError("config file is for '" + c["command"].get<std::string>() + "', not '" + command + "'");
  c["command"] = command;
  if (o.space) c["space"] = *o.space;
  if (o.m) c["m"] = *o.m;
  if (!o.params.empty()) {
    if (!c.contains("params")) c["params"] = nlohmann::json::object();
    for (const auto& kv : o.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--param expects k=v, got '" + kv + "'");
      c["params"][kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  if (!o.ideal.empty()) c["ideal"] = o.ideal;
  if (!o.weight.empty()) c["weight"] = o.weight;
  if (o.max_level) c["max_level"] = *o.max_level;
  if (o.max_wlevel) c["max_wlevel"] = *o.max_wlevel;
  if (!o.schatten.empty()) c["schatten"] = o.schatten;
  if (o.poly) c["poly"] = *o.poly;
  if (o.module) c["module"] = *o.module;
  if (o.sign) c["sign"] = *o.sign;
  if (o.jobs) c["jobs"] = *o.jobs;
  if (o.out) c["out"] = *o.out;
  if (o.format) c["format"] = *o.format;
  return c;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  f << text;
}

int run(const std::string& command, const Options& o) {
  nlohmann::json cfg = build_config(command, o);
  const std::string format = cfg.value("format", std::string("json"));
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  std::optional<std::string> out;
  if (cfg.contains("out")) {
    if (!cfg["out"].is_string()) throw UsageError("'out' must be a string");
    out = cfg["out"].get<std::string>();
  }
  cfg.erase("format");
  cfg.erase("out");

  wsm_config* raw_config = nullptr;
  if (wsm_config_parse(cfg.dump().c_str(), &raw_config) != WSM_OK) throw UsageError(wsm_last_error());
  std::unique_ptr<wsm_config, decltype(&wsm_config_free)> config(raw_config, wsm_config_free);

  wsm_report* raw_report = nullptr;
  const wsm_status st = wsm_run(config.get(), &raw_report);
  if (st != WSM_OK) throw UsageError(std::string(wsm_status_name(st)) + ": " + wsm_last_error());
  std::unique_ptr<wsm_report, decltype(&wsm_report_free)> report(raw_report, wsm_report_free);

  if (format == "json") {
    if (out) write_file(*out, wsm_report_json(report.get()));
    else std::cout << wsm_report_json(report.get());
  } else {
    const std::size_t n = wsm_report_table_count(report.get());
    if (out) std::filesystem::create_directories(*out);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = wsm_report_table_name(report.get(), i);
      const std::string csv = wsm_report_table_csv(report.get(), i);
      if (out) write_file(std::filesystem::path(*out) / (name + ".csv"), csv);
      else std::cout << "# table: " << name << "\n" << csv;
    }
  }
  return wsm_report_has_exact_fail(report.get()) ? kExitExactFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and float diagnostics for graded Hilbert modules over weighted shift spaces"};
  app.set_version_flag("--version", wsm_version());
  app.require_subcommand(1);
  Options opts;
  std::string chosen;

  const std::map<std::string, std::vector<std::pair<std::string, std::string>>> groups = {
      {"space", {{"describe", "weights and defect diagonal of a builtin space"}}},
      {"ideal",
       {{"hilbert", "Hilbert function and eventual polynomial"}, {"decompose", "residue decomposition for a weight"}}},
      {"diag",
       {{"normality", "commutator and defect norms, decay and Schatten sums"},
        {"trace", "trace of the self-commutator sum per level"},
        {"koszul", "Koszul homology and Euler characteristic"},
        {"section5", "trace inequality for bounded-dimension quotients"},
        {"qweights", "quotient shift weights for a linear generator"}}},
      {"preg",
       {{"delta", "kernel coefficients and weights of H_P"},
        {"check", "defect projection, J_P, module map, kernel and contractivity"},
        {"kernel", "kernel of X_P against J_P per weighted level"}}},
  };
  for (const auto& [group, leaves] : groups) {
    auto* g = app.add_subcommand(group, group + " commands");
    g->require_subcommand(1);
    for (const auto& [leaf, help] : leaves) {
      auto* c = g->add_subcommand(leaf, help);
      add_flags(c, opts);
      const std::string name = group + " " + leaf;
      c->callback([&chosen, name] { chosen = name; });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return run(chosen, opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
