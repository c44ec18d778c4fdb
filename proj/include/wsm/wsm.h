#ifndef WSM_H
#define WSM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WSM_API __declspec(dllexport)
#else
#define WSM_API __attribute__((visibility("default")))
#endif

typedef enum wsm_status {
  WSM_OK = 0,
  WSM_ERR_NULL_ARGUMENT = 1,
  WSM_ERR_JSON = 2,
  WSM_ERR_INVALID_ARITY = 10,
  WSM_ERR_DIMENSION_MISMATCH = 11,
  WSM_ERR_INVALID_ARGUMENT = 12,
  WSM_ERR_PARSE = 13,
  WSM_ERR_MODE = 14,
  WSM_ERR_WINDOW = 15,
  WSM_ERR_NONPOSITIVE_WEIGHT = 16,
  WSM_ERR_SIGN_CONVENTION = 17,
  WSM_ERR_STRUCTURAL = 18,
  WSM_ERR_SCENARIO = 19,
  WSM_ERR_NOT_HERMITIAN = 20,
  WSM_ERR_OVERFLOW = 21,
  WSM_ERR_INTERNAL = 99
} wsm_status;

typedef struct wsm_config wsm_config;
typedef struct wsm_report wsm_report;
typedef struct wsm_space wsm_space;

WSM_API const char* wsm_version(void);
// Message of the last failing call on this thread ("" if none).
WSM_API const char* wsm_last_error(void);
WSM_API const char* wsm_status_name(wsm_status status);
// Space-separated list of "group action" commands, each joined with '-'.
WSM_API const char* wsm_commands(void);

// Scenario configs are JSON objects; see the README for the keys.
WSM_API wsm_status wsm_config_parse(const char* json, wsm_config** out);
WSM_API void wsm_config_free(wsm_config* config);
// Resolved config with all defaults filled in; owned by the handle.
WSM_API const char* wsm_config_json(const wsm_config* config);

WSM_API wsm_status wsm_run(const wsm_config* config, wsm_report** out);
WSM_API void wsm_report_free(wsm_report* report);
WSM_API int wsm_report_has_exact_fail(const wsm_report* report);
// Canonical JSON (2-space indent, trailing newline); owned by the handle.
WSM_API const char* wsm_report_json(const wsm_report* report);
WSM_API size_t wsm_report_table_count(const wsm_report* report);
WSM_API const char* wsm_report_table_name(const wsm_report* report, size_t index);
WSM_API const char* wsm_report_table_csv(const wsm_report* report, size_t index);

// Builtin spaces: "drury-arveson", "hardy-ball", "bergman-ball", "polydisk-hardy".
// params_json may be NULL or a JSON object of string values, e.g. {"c2":"1/2"}.
WSM_API wsm_status wsm_space_create(const char* kind, size_t m, const char* params_json, wsm_space** out);
WSM_API void wsm_space_free(wsm_space* space);
WSM_API size_t wsm_space_arity(const wsm_space* space);
// Exact weight at alpha (length = arity) as "p/q"; the string lives until the next
// call on this thread.
WSM_API wsm_status wsm_space_weight(const wsm_space* space, const unsigned* alpha, const char** out);

#ifdef __cplusplus
}
#endif

#endif
