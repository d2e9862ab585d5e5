#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hwmon/hwmon.h"

namespace {

const char* kSmall = R"(
road_length_km = 6
rsu_spacing_km = 3
vbp_spacing_m = 500
sensors_per_subarea = 30
duration_s = 600
drain_s = 1200
)";

std::string take(char* s) {
  std::string out = s ? s : "";
  hwmon_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("config lifecycle") {
  hwmon_config* cfg = nullptr;
  REQUIRE(hwmon_config_default(&cfg) == HWMON_OK);
  CHECK(hwmon_config_validate(cfg) == HWMON_OK);
  CHECK(hwmon_config_set(cfg, "rsu_spacing_km", "3") == HWMON_OK);
  double x = 0;
  CHECK(hwmon_config_get_double(cfg, "rsu_spacing_km", &x) == HWMON_OK);
  CHECK(x == 3.0);

  CHECK(hwmon_config_set(cfg, "no_such_key", "1") == HWMON_E_PARSE);
  CHECK(std::string(hwmon_last_error()).find("no_such_key") != std::string::npos);
  CHECK(hwmon_config_set(cfg, "rsu_spacing_km", "abc") == HWMON_E_PARSE);
  CHECK(hwmon_config_get_double(cfg, "rsu_spacing_km", &x) == HWMON_OK);
  CHECK(x == 3.0);  // rejected values leave the config untouched

  CHECK(hwmon_config_set(cfg, "rsu_spacing_km", "2") == HWMON_OK);
  CHECK(hwmon_config_set(cfg, "vbp_spacing_m", "2500") == HWMON_OK);
  CHECK(hwmon_config_validate(cfg) == HWMON_E_INVALID_CONFIG);
  const std::string msg = hwmon_last_error();
  CHECK(msg.find("vbp_spacing_m") != std::string::npos);
  CHECK(msg.find("rsu_spacing_km") != std::string::npos);

  char* text = nullptr;
  REQUIRE(hwmon_config_to_text(cfg, &text) == HWMON_OK);
  hwmon_config* back = nullptr;
  CHECK(hwmon_config_parse(text, &back) == HWMON_OK);
  hwmon_string_free(text);
  hwmon_config_free(back);
  hwmon_config_free(cfg);
}

TEST_CASE("null handles are rejected") {
  CHECK(hwmon_config_default(nullptr) == HWMON_E_INVALID_ARGUMENT);
  CHECK(hwmon_config_validate(nullptr) == HWMON_E_INVALID_ARGUMENT);
  hwmon_result* r = nullptr;
  CHECK(hwmon_run(nullptr, HWMON_MODE_COMBINED, 0, &r) == HWMON_E_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  hwmon_config_free(nullptr);
  hwmon_world_free(nullptr);
  hwmon_result_free(nullptr);
}

TEST_CASE("missing file") {
  hwmon_config* cfg = nullptr;
  CHECK(hwmon_config_load("/nonexistent/scenario.toml", &cfg) == HWMON_E_IO);
  CHECK(cfg == nullptr);
}

TEST_CASE("modes") {
  int m = -1;
  CHECK(hwmon_mode_parse("wsn_only", &m) == HWMON_OK);
  CHECK(m == HWMON_MODE_WSN_ONLY);
  CHECK(hwmon_mode_parse("teleport", &m) == HWMON_E_INVALID_ARGUMENT);
  CHECK(std::string(hwmon_mode_name(HWMON_MODE_COMBINED)) == "combined");
}

TEST_CASE("build, run, render") {
  hwmon_config* cfg = nullptr;
  REQUIRE(hwmon_config_parse(kSmall, &cfg) == HWMON_OK);
  hwmon_world* w = nullptr;
  REQUIRE(hwmon_world_build(cfg, 5, &w) == HWMON_OK);
  size_t rsus = 0, subs = 0, sensors = 0;
  CHECK(hwmon_world_counts(w, &rsus, &subs, &sensors) == HWMON_OK);
  CHECK(rsus == 3);
  CHECK(subs == 20);
  CHECK(sensors == 600);

  hwmon_result* results[2] = {nullptr, nullptr};
  REQUIRE(hwmon_run(w, HWMON_MODE_COMBINED, 1, &results[0]) == HWMON_OK);
  REQUIRE(hwmon_run(w, HWMON_MODE_WSN_ONLY, 1, &results[1]) == HWMON_OK);
  CHECK(hwmon_run(w, 7, 1, &results[0]) == HWMON_E_INVALID_ARGUMENT);

  for (auto* r : results) {
    int ok = 0;
    CHECK(hwmon_result_audit(r, &ok, nullptr) == HWMON_OK);
    CHECK(ok == 1);
    double mean = 0;
    CHECK(hwmon_result_mean_completion(r, &mean) == HWMON_OK);
    CHECK(mean > 0);
    size_t n = 0;
    CHECK(hwmon_result_period_count(r, &n) == HWMON_OK);
    CHECK(n == 1);
    hwmon_period p{};
    CHECK(hwmon_result_period(r, 0, &p) == HWMON_OK);
    CHECK(p.complete == 1);
    CHECK(p.completion_time_s == mean);
    CHECK(hwmon_result_period(r, 1, &p) == HWMON_E_OUT_OF_RANGE);
    hwmon_counters c{};
    CHECK(hwmon_result_counters(r, &c) == HWMON_OK);
    CHECK(c.tasks_created == 20);
    CHECK(c.tasks_delivered == 20);
  }

  char* csv = nullptr;
  REQUIRE(hwmon_metrics_csv(results, 2, &csv) == HWMON_OK);
  const auto metrics = take(csv);
  CHECK(metrics.rfind("mode,seed,period,start_s,complete,completion_time_s", 0) == 0);
  CHECK(metrics.find("combined,5,0,") != std::string::npos);
  CHECK(metrics.find("wsn_only,5,0,") != std::string::npos);

  REQUIRE(hwmon_event_log_csv(results[0], &csv) == HWMON_OK);
  const auto log = take(csv);
  CHECK(log.rfind("time_s,actor,event,task_id,period,detail", 0) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "hwmon_capi_test";
  std::filesystem::create_directories(dir);
  const auto file = (dir / "metrics.csv").string();
  CHECK(hwmon_write_file(file.c_str(), metrics.c_str()) == HWMON_OK);
  std::ifstream in(file);
  std::string first;
  std::getline(in, first);
  CHECK(first == "mode,seed,period,start_s,complete,completion_time_s,subareas_delivered,subareas_total");
  CHECK(hwmon_write_file("/proc/no/such/dir/x.csv", "x") == HWMON_E_IO);

  char* dump = nullptr;
  REQUIRE(hwmon_world_dump(w, &dump) == HWMON_OK);
  CHECK(take(dump).find("[rsus] 3") != std::string::npos);

  for (auto* r : results) hwmon_result_free(r);
  hwmon_world_free(w);
  hwmon_config_free(cfg);
}
