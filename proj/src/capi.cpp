#include "wsm/wsm.h"

#include <string>
#include <vector>

#include "wsm/error.hpp"
#include "wsm/scenario.hpp"
#include "wsm/space.hpp"

struct wsm_config {
  nlohmann::ordered_json resolved;
  std::string text;
};

struct wsm_report {
  wsm::Report report;
  std::string json;
  std::vector<std::string> names;
  std::vector<std::string> csv;
};

struct wsm_space {
  wsm::WeightedShiftSpace space;
};

namespace {

thread_local std::string last_error;
thread_local std::string scratch;

wsm_status fail(wsm_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
wsm_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return WSM_OK;
  } catch (const wsm::Error& e) {
    return fail(static_cast<wsm_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(WSM_ERR_JSON, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WSM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WSM_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* wsm_version(void) { return wsm::kToolVersion; }

const char* wsm_last_error(void) { return last_error.c_str(); }

const char* wsm_status_name(wsm_status status) {
  switch (status) {
    case WSM_OK: return "ok";
    case WSM_ERR_NULL_ARGUMENT: return "null-argument";
    case WSM_ERR_JSON: return "json-error";
    case WSM_ERR_INVALID_ARITY: return "invalid-arity";
    case WSM_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case WSM_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case WSM_ERR_PARSE: return "parse-error";
    case WSM_ERR_MODE: return "mode-error";
    case WSM_ERR_WINDOW: return "window-error";
    case WSM_ERR_NONPOSITIVE_WEIGHT: return "nonpositive-weight";
    case WSM_ERR_SIGN_CONVENTION: return "sign-convention";
    case WSM_ERR_STRUCTURAL: return "structural-error";
    case WSM_ERR_SCENARIO: return "scenario-error";
    case WSM_ERR_NOT_HERMITIAN: return "not-hermitian";
    case WSM_ERR_OVERFLOW: return "overflow";
    case WSM_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

const char* wsm_commands(void) {
  static const std::string list = [] {
    std::string s;
    for (auto c : wsm::scenario_commands()) {
      for (auto& ch : c)
        if (ch == ' ') ch = '-';
      s += (s.empty() ? "" : " ") + c;
    }
    return s;
  }();
  return list.c_str();
}

wsm_status wsm_config_parse(const char* json, wsm_config** out) {
  if (json == nullptr || out == nullptr) return fail(WSM_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<wsm_config>();
    c->resolved = wsm::resolve_config(nlohmann::json::parse(json));
    c->text = c->resolved.dump(2) + "\n";
    *out = c.release();
  });
}

void wsm_config_free(wsm_config* config) { delete config; }

const char* wsm_config_json(const wsm_config* config) { return config ? config->text.c_str() : ""; }

wsm_status wsm_run(const wsm_config* config, wsm_report** out) {
  if (config == nullptr || out == nullptr) return fail(WSM_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<wsm_report>();
    r->report = wsm::run_scenario(config->resolved);
    r->json = wsm::to_json(r->report).dump(2) + "\n";
    for (const auto& t : r->report.tables) {
      r->names.push_back(t.name);
      r->csv.push_back(wsm::to_csv(t));
    }
    *out = r.release();
  });
}

void wsm_report_free(wsm_report* report) { delete report; }

int wsm_report_has_exact_fail(const wsm_report* report) { return report && report->report.has_exact_fail() ? 1 : 0; }

const char* wsm_report_json(const wsm_report* report) { return report ? report->json.c_str() : ""; }

size_t wsm_report_table_count(const wsm_report* report) { return report ? report->names.size() : 0; }

const char* wsm_report_table_name(const wsm_report* report, size_t index) {
  return report && index < report->names.size() ? report->names[index].c_str() : nullptr;
}

const char* wsm_report_table_csv(const wsm_report* report, size_t index) {
  return report && index < report->csv.size() ? report->csv[index].c_str() : nullptr;
}

wsm_status wsm_space_create(const char* kind, size_t m, const char* params_json, wsm_space** out) {
  if (kind == nullptr || out == nullptr) return fail(WSM_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::map<std::string, std::string> params;
    if (params_json != nullptr) {
      const auto j = nlohmann::json::parse(params_json);
      for (const auto& [k, v] : j.items()) params[k] = v.get<std::string>();
    }
    *out = new wsm_space{wsm::builtin_space(wsm::parse_space_kind(kind), m, params)};
  });
}

void wsm_space_free(wsm_space* space) { delete space; }

size_t wsm_space_arity(const wsm_space* space) { return space ? space->space.arity() : 0; }

wsm_status wsm_space_weight(const wsm_space* space, const unsigned* alpha, const char** out) {
  if (space == nullptr || alpha == nullptr || out == nullptr) return fail(WSM_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::uint32_t> a(alpha, alpha + space->space.arity());
    scratch = wsm::to_string(space->space.weight(wsm::MultiIndex(std::move(a))));
    *out = scratch.c_str();
  });
}

}  // extern "C"
