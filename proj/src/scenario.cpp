#include "wsm/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wsm/diagnostics.hpp"
#include "wsm/error.hpp"
#include "wsm/ideal.hpp"
#include "wsm/operators.hpp"
#include "wsm/posreg.hpp"
#include "wsm/space.hpp"

namespace wsm {

namespace {

using ojson = nlohmann::ordered_json;

struct CommandSpec {
  std::string name;
  std::vector<std::string> keys;  // accepted keys besides "command"
  std::vector<std::string> required;
};

const std::vector<CommandSpec>& specs() {
  static const std::vector<CommandSpec> s = {
      {"space describe", {"space", "m", "params", "max_level"}, {"m"}},
      {"ideal hilbert", {"m", "ideal", "max_level"}, {"m", "ideal"}},
      {"ideal decompose", {"m", "ideal", "weight", "max_wlevel"}, {"m", "ideal", "weight"}},
      {"diag normality", {"space", "m", "params", "ideal", "max_level", "schatten", "jobs"}, {"m"}},
      {"diag trace", {"space", "m", "params", "max_level"}, {"m"}},
      {"diag koszul", {"m", "ideal", "module", "max_level"}, {"m"}},
      {"diag section5", {"space", "m", "params", "ideal", "max_level", "jobs"}, {"m", "ideal"}},
      {"diag qweights", {"space", "m", "params", "ideal", "max_level"}, {"m", "ideal"}},
      {"preg delta", {"poly", "max_level", "sign"}, {"poly"}},
      {"preg check", {"poly", "max_level", "max_wlevel"}, {"poly"}},
      {"preg kernel", {"poly", "max_wlevel"}, {"poly"}},
  };
  return s;
}

const std::map<std::string, std::uint32_t>& default_levels() {
  static const std::map<std::string, std::uint32_t> d = {
      {"space describe", 4}, {"ideal hilbert", 20}, {"diag normality", 20}, {"diag trace", 20},
      {"diag koszul", 10},   {"diag section5", 20}, {"diag qweights", 100}, {"preg delta", 10},
      {"preg check", 12},
  };
  return d;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); }

std::uint64_t get_uint(const nlohmann::json& j, const std::string& key, std::uint64_t lo, std::uint64_t hi) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) bad("'" + key + "' must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < static_cast<std::int64_t>(lo) || static_cast<std::uint64_t>(x) > hi)
    bad("'" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
        std::to_string(x));
  return static_cast<std::uint64_t>(x);
}

std::vector<std::string> get_strings(const nlohmann::json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) bad("'" + key + "' must be a string or an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) bad("'" + key + "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<GradedPolynomial> parse_ideal(const ojson& cfg) {
  std::vector<GradedPolynomial> gens;
  const auto m = cfg.at("m").get<std::size_t>();
  for (const auto& s : cfg.at("ideal")) gens.push_back(GradedPolynomial::parse(s.get<std::string>(), m));
  return gens;
}

WeightedShiftSpace make_space(const ojson& cfg) {
  std::map<std::string, std::string> params;
  for (const auto& [k, v] : cfg.at("params").items()) params[k] = v.get<std::string>();
  return builtin_space(parse_space_kind(cfg.at("space").get<std::string>()), cfg.at("m").get<std::size_t>(), params);
}

Report space_describe(const ojson& cfg) {
  const auto space = make_space(cfg);
  const auto D = cfg.at("max_level").get<std::uint32_t>();
  Report rep;
  rep.scenario = "space-describe";
  rep.params["tool_version"] = kToolVersion;
  rep.params["kind"] = to_string(space.kind());
  rep.params["m"] = space.arity();
  rep.params["params"] = ojson::object();
  for (const auto& [k, v] : space.params()) rep.params["params"][k] = v;
  rep.params["preview_degree"] = D;
  Table t{"sample_weights", {{"alpha", "meta"}, {"degree", "exact"}, {"weight", "exact"}, {"defect", "exact"}}, {}};
  for (std::uint32_t k = 0; k <= D; ++k)
    for (const auto& a : enumerate_level(space.arity(), k))
      t.add_row({Cell::label(a.str()), Cell::count(k), Cell::exact(space.weight(a)),
                 Cell::exact(space.defect_diagonal(a))});
  rep.tables.push_back(std::move(t));
  rep.verdicts.push_back({"weights_positive", Verdict::exact_pass,
                          "all weights positive for |alpha| <= " + std::to_string(D)});
  return rep;
}

Report ideal_hilbert(const ojson& cfg) {
  const auto m = cfg.at("m").get<std::size_t>();
  const GradedIdeal ideal(m, parse_ideal(cfg));
  const auto K = cfg.at("max_level").get<std::uint32_t>();
  const auto fit = hilbert_samuel_fit(ideal, K);
  Report rep;
  rep.scenario = "ideal-hilbert";
  rep.params["tool_version"] = kToolVersion;
  rep.params["window"] = fit.window;
  Table t{"hilbert", {{"k", "exact"}, {"dim_ideal", "exact"}, {"dim_level", "exact"}, {"dim_quotient", "exact"}}, {}};
  for (const auto& r : fit.table)
    t.add_row({Cell::count(r.k), Cell::count(static_cast<std::int64_t>(r.dim_ideal)),
               Cell::count(static_cast<std::int64_t>(r.dim_level)),
               Cell::count(static_cast<std::int64_t>(r.dim_quotient))});
  Table p{"hilbert_polynomial", {{"power", "exact"}, {"coefficient", "exact"}}, {}};
  for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
    p.add_row({Cell::count(static_cast<std::int64_t>(j)), Cell::exact(fit.coefficients[j])});
  rep.tables.push_back(std::move(t));
  rep.tables.push_back(std::move(p));
  rep.verdicts.push_back({"hilbert_polynomial", Verdict::reported_only,
                          fit.stabilized ? "degree " + std::to_string(fit.degree) + " from level " +
                                               std::to_string(fit.stabilization_degree)
                                         : "not stabilized within the window"});
  return rep;
}

Report ideal_decompose(const ojson& cfg) {
  const auto m = cfg.at("m").get<std::size_t>();
  const WeightVector n(cfg.at("weight").get<std::vector<std::uint32_t>>());
  if (n.size() != m) bad("'weight' needs " + std::to_string(m) + " entries");
  const GradedIdeal ideal(m, parse_ideal(cfg), n);
  const auto L = cfg.at("max_wlevel").get<std::uint32_t>();
  Report rep;
  rep.scenario = "ideal-decompose";
  rep.params["tool_version"] = kToolVersion;
  rep.params["residue_classes"] = ojson::array();
  for (const auto& r : residue_classes(n)) rep.params["residue_classes"].push_back(r.str());
  Table lv{"levels", {{"level", "exact"}, {"dim_component", "exact"}, {"sum_class_dims", "exact"}, {"defect", "exact"}},
           {}};
  Table cl{"classes", {{"residue", "meta"}, {"level", "exact"}, {"dim", "exact"}}, {}};
  std::string nonzero;
  for (const auto& r : residue_decompose(ideal, L)) {
    std::uint64_t sum = 0;
    for (const auto& [cls, d] : r.class_dims) {
      sum += d;
      cl.add_row({Cell::label(cls.str()), Cell::count(r.level), Cell::count(static_cast<std::int64_t>(d))});
    }
    lv.add_row({Cell::count(r.level), Cell::count(static_cast<std::int64_t>(r.dim_component)),
                Cell::count(static_cast<std::int64_t>(sum)), Cell::count(static_cast<std::int64_t>(r.defect))});
    if (r.defect != 0)
      nonzero += (nonzero.empty() ? "" : ",") + std::to_string(r.level) + ":" + std::to_string(r.defect);
  }
  std::stable_sort(cl.rows.begin(), cl.rows.end(), [](const auto& a, const auto& b) { return a[0].text < b[0].text; });
  rep.tables.push_back(std::move(lv));
  rep.tables.push_back(std::move(cl));
  rep.verdicts.push_back({"decomposition_defect", Verdict::reported_only,
                          nonzero.empty() ? "defect 0 at every level" : "nonzero defect (level:defect) " + nonzero});
  return rep;
}

std::optional<GradedIdeal> optional_ideal(const ojson& cfg) {
  if (!cfg.contains("ideal") || cfg.at("ideal").empty()) return std::nullopt;
  return GradedIdeal(cfg.at("m").get<std::size_t>(), parse_ideal(cfg));
}

ModuleRealization realize(const ojson& cfg, std::uint32_t levels) {
  auto space = make_space(cfg);
  if (auto ideal = optional_ideal(cfg)) return ModuleRealization::quotient(std::move(space), std::move(*ideal), levels);
  return ModuleRealization::full(std::move(space), levels);
}

PositiveRegularPoly make_poly(const ojson& cfg) {
  return PositiveRegularPoly::from_polynomial(GradedPolynomial::parse(cfg.at("poly").get<std::string>()));
}

Report dispatch(const ojson& cfg) {
  const auto cmd = cfg.at("command").get<std::string>();
  auto level = [&] { return cfg.at("max_level").get<std::uint32_t>(); };
  auto wlevel = [&] { return cfg.at("max_wlevel").get<std::uint32_t>(); };
  auto jobs = [&] { return cfg.at("jobs").get<unsigned>(); };
  if (cmd == "space describe") return space_describe(cfg);
  if (cmd == "ideal hilbert") return ideal_hilbert(cfg);
  if (cmd == "ideal decompose") return ideal_decompose(cfg);
  if (cmd == "diag normality")
    return normality_report(realize(cfg, level() + 1), level(), cfg.at("schatten").get<std::vector<double>>(), jobs());
  if (cmd == "diag trace") return trace_report(make_space(cfg), level());
  if (cmd == "diag koszul") {
    const auto mod = cfg.at("module").get<std::string>();
    const auto kind = mod == "full" ? KoszulModule::full : mod == "ideal" ? KoszulModule::ideal : KoszulModule::quotient;
    return koszul_report(kind, cfg.at("m").get<std::size_t>(), optional_ideal(cfg), level());
  }
  if (cmd == "diag section5") return section5_report(realize(cfg, level() + 1), level(), jobs());
  if (cmd == "diag qweights") {
    const auto gens = parse_ideal(cfg);
    if (gens.size() != 1) bad("qweights takes exactly one generator");
    return qweights_report(make_space(cfg), gens.front(), level());
  }
  if (cmd == "preg delta")
    return preg_delta_report(make_poly(cfg), level(),
                             cfg.at("sign") == "printed" ? SignConvention::printed : SignConvention::all_plus);
  if (cmd == "preg check") return preg_check_report(make_poly(cfg), wlevel(), level());
  if (cmd == "preg kernel") return preg_kernel_report(make_poly(cfg), wlevel());
  bad("unknown command '" + cmd + "'");
}

}  // namespace

const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : specs()) v.push_back(s.name);
    return v;
  }();
  return names;
}

ojson resolve_config(const nlohmann::json& config) {
  if (!config.is_object()) bad("config must be a JSON object");
  if (!config.contains("command") || !config.at("command").is_string()) bad("config needs a 'command' string");
  const auto cmd = config.at("command").get<std::string>();
  const auto it = std::find_if(specs().begin(), specs().end(), [&](const auto& s) { return s.name == cmd; });
  if (it == specs().end()) bad("unknown command '" + cmd + "'");
  const std::set<std::string> allowed(it->keys.begin(), it->keys.end());
  for (const auto& [k, v] : config.items())
    if (k != "command" && !allowed.count(k)) bad("key '" + k + "' is not accepted by '" + cmd + "'");
  for (const auto& k : it->required)
    if (!config.contains(k)) bad("'" + cmd + "' needs '" + k + "'");

  ojson out;
  out["command"] = cmd;
  auto has = [&](const char* k) { return allowed.count(k) > 0; };
  if (has("space")) {
    const auto name = config.value("space", std::string("drury-arveson"));
    const auto kind = parse_space_kind(name);
    if (kind == SpaceKind::custom) bad("custom spaces are not available from a scenario config");
    out["space"] = to_string(kind);
  }
  if (has("m")) out["m"] = get_uint(config, "m", 1, 64);
  if (has("params")) {
    out["params"] = ojson::object();
    if (config.contains("params")) {
      if (!config.at("params").is_object()) bad("'params' must be an object");
      std::map<std::string, std::string> p;
      for (const auto& [k, v] : config.at("params").items()) {
        if (v.is_string()) p[k] = v.get<std::string>();
        else if (v.is_number_integer()) p[k] = std::to_string(v.get<std::int64_t>());
        else bad("space parameter '" + k + "' must be a string or integer");
      }
      for (const auto& [k, v] : p) out["params"][k] = v;
    }
    // Resolve defaults (and reject unknown parameters) through the space itself.
    std::map<std::string, std::string> resolved;
    for (const auto& [k, v] : out["params"].items()) resolved[k] = v.get<std::string>();
    const auto space = builtin_space(parse_space_kind(out["space"].get<std::string>()), out["m"].get<std::size_t>(),
                                     resolved);
    out["params"] = ojson::object();
    for (const auto& [k, v] : space.params()) out["params"][k] = v;
  }
  if (has("ideal")) {
    out["ideal"] = ojson::array();
    if (config.contains("ideal"))
      for (const auto& s : get_strings(config, "ideal"))
        out["ideal"].push_back(GradedPolynomial::parse(s, out["m"].get<std::size_t>()).str());
  }
  if (has("weight")) {
    const auto& w = config.at("weight");
    if (!w.is_array()) bad("'weight' must be an array of positive integers");
    out["weight"] = ojson::array();
    for (const auto& e : w) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 1) bad("'weight' entries must be positive integers");
      out["weight"].push_back(e.get<std::uint32_t>());
    }
  }
  if (has("module")) {
    const bool any_ideal = !out["ideal"].empty();
    const auto mod = config.value("module", std::string(any_ideal ? "quotient" : "full"));
    if (mod != "full" && mod != "ideal" && mod != "quotient") bad("'module' must be full, ideal or quotient");
    if (mod != "full" && !any_ideal) bad("module '" + mod + "' needs an ideal");
    out["module"] = mod;
  }
  if (has("poly")) {
    if (!config.at("poly").is_string()) bad("'poly' must be a string");
    out["poly"] = make_poly(config).str();
  }
  if (has("sign")) {
    const auto sign = config.value("sign", std::string("all-plus"));
    if (sign != "all-plus" && sign != "printed") bad("'sign' must be all-plus or printed");
    out["sign"] = sign;
  }
  if (has("max_level")) {
    const auto d = default_levels().at(cmd);
    out["max_level"] = config.contains("max_level") ? get_uint(config, "max_level", 0, 100000) : d;
  }
  if (has("max_wlevel")) out["max_wlevel"] = config.contains("max_wlevel") ? get_uint(config, "max_wlevel", 0, 10000) : 8;
  if (has("schatten")) {
    out["schatten"] = ojson::array();
    const auto p = config.contains("schatten") ? config.at("schatten") : nlohmann::json::array({1, 2});
    if (!p.is_array()) bad("'schatten' must be an array of numbers");
    for (const auto& e : p) {
      if (!e.is_number() || e.get<double>() < 1) bad("Schatten exponents must be numbers >= 1");
      out["schatten"].push_back(e.get<double>());
    }
  }
  if (has("jobs")) out["jobs"] = config.contains("jobs") ? get_uint(config, "jobs", 1, 256) : 1;
  return out;
}

Report run_scenario(const ojson& resolved) {
  Report rep = dispatch(resolved);
  ojson params;
  params["config"] = resolved;
  for (const auto& [k, v] : rep.params.items())
    if (k != "config") params[k] = v;
  rep.params = std::move(params);
  return rep;
}

}  // namespace wsm
