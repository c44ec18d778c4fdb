#include "test_main.hpp"

#include <cstring>
#include <string>

#include "wsm/wsm.h"

TEST_CASE("version and commands") {
  CHECK(std::string(wsm_version()) == "0.1.0");
  CHECK(std::string(wsm_commands()).find("preg-check") != std::string::npos);
  CHECK(std::string(wsm_status_name(WSM_ERR_PARSE)) == "parse-error");
}

TEST_CASE("config validation") {
  wsm_config* c = nullptr;
  CHECK(wsm_config_parse(R"({"command":"space describe","m":0})", &c) == WSM_ERR_INVALID_ARGUMENT);
  CHECK(c == nullptr);
  CHECK(std::string(wsm_last_error()).find("'m'") != std::string::npos);
  CHECK(wsm_config_parse(R"({"command":"space describe","m":2,"extra":1})", &c) == WSM_ERR_INVALID_ARGUMENT);
  CHECK(wsm_config_parse("{not json", &c) == WSM_ERR_JSON);
  CHECK(wsm_config_parse(R"({"command":"ideal hilbert","m":2,"ideal":["z1+*z2"]})", &c) == WSM_ERR_PARSE);
  CHECK(std::string(wsm_last_error()).find("column") != std::string::npos);
  CHECK(wsm_config_parse(nullptr, &c) == WSM_ERR_NULL_ARGUMENT);

  REQUIRE(wsm_config_parse(R"({"command":"diag trace","m":2,"space":"hardy-ball"})", &c) == WSM_OK);
  const std::string resolved = wsm_config_json(c);
  CHECK(resolved.find("\"max_level\": 20") != std::string::npos);
  CHECK(std::string(wsm_last_error()).empty());
  wsm_config_free(c);
}

TEST_CASE("run and export") {
  wsm_config* c = nullptr;
  REQUIRE(wsm_config_parse(R"({"command":"preg check","poly":"1/2*z1+1/2*z2+1/4*z1*z2","max_wlevel":6})", &c) ==
          WSM_OK);
  wsm_report* a = nullptr;
  wsm_report* b = nullptr;
  REQUIRE(wsm_run(c, &a) == WSM_OK);
  REQUIRE(wsm_run(c, &b) == WSM_OK);
  CHECK(std::strcmp(wsm_report_json(a), wsm_report_json(b)) == 0);
  CHECK(wsm_report_has_exact_fail(a) == 0);
  const std::string json = wsm_report_json(a);
  CHECK(json.find("\"config\"") != std::string::npos);
  REQUIRE(wsm_report_table_count(a) >= 3);
  CHECK(std::string(wsm_report_table_name(a, 0)) == "defect");
  CHECK(std::string(wsm_report_table_csv(a, 0)).rfind("beta,value,expected\n", 0) == 0);
  CHECK(wsm_report_table_name(a, 99) == nullptr);
  wsm_report_free(a);
  wsm_report_free(b);
  wsm_config_free(c);

  REQUIRE(wsm_config_parse(R"({"command":"preg delta","poly":"1/2*z+1/2*z^2","sign":"printed"})", &c) == WSM_OK);
  REQUIRE(wsm_run(c, &a) == WSM_OK);
  CHECK(wsm_report_has_exact_fail(a) == 1);
  wsm_report_free(a);
  wsm_config_free(c);
}

TEST_CASE("runtime errors carry status codes") {
  wsm_config* c = nullptr;
  REQUIRE(wsm_config_parse(R"({"command":"diag section5","m":3,"space":"hardy-ball","ideal":["z1"]})", &c) == WSM_OK);
  wsm_report* r = nullptr;
  CHECK(wsm_run(c, &r) == WSM_ERR_SCENARIO);
  CHECK(r == nullptr);
  wsm_config_free(c);
}

TEST_CASE("space handle") {
  wsm_space* s = nullptr;
  CHECK(wsm_space_create("hardy-ball", 0, nullptr, &s) == WSM_ERR_INVALID_ARITY);
  CHECK(wsm_space_create("nowhere", 2, nullptr, &s) == WSM_ERR_INVALID_ARGUMENT);
  const auto st = wsm_space_create("polydisk-hardy", 2, R"({"c2":"1/2"})", &s);
  INFO(std::string(wsm_last_error()));
  REQUIRE(st == WSM_OK);
  CHECK(wsm_space_arity(s) == 2);
  const unsigned alpha[] = {1, 2};
  const char* w = nullptr;
  REQUIRE(wsm_space_weight(s, alpha, &w) == WSM_OK);
  CHECK(std::string(w) == "1/8");
  wsm_space_free(s);
  REQUIRE(wsm_space_create("da", 2, nullptr, &s) == WSM_OK);
  const unsigned beta[] = {1, 1};
  REQUIRE(wsm_space_weight(s, beta, &w) == WSM_OK);
  CHECK(std::string(w) == "1/2");
  wsm_space_free(s);
}
