#include "hwmon/hwmon.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "hwmon/core.hpp"
#include "hwmon/engine.hpp"
#include "hwmon/output.hpp"

struct hwmon_config {
  hwmon::ScenarioConfig cfg;
};

struct hwmon_world {
  hwmon::World world;
};

struct hwmon_result {
  hwmon::RunResult run;
};

namespace {

thread_local std::string last_error;

int fail(int code, std::string message) {
  last_error = std::move(message);
  return code;
}

// Runs f, mapping exceptions to status codes.
template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const hwmon::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HWMON_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HWMON_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HWMON_E_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

int null_arg(const char* what) { return fail(HWMON_E_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

std::vector<hwmon::RunResult> gather(const hwmon_result* const* results, size_t n) {
  std::vector<hwmon::RunResult> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!results[i]) throw hwmon::Error(hwmon::ErrorCode::InvalidArgument, "result " + std::to_string(i) + " is NULL");
    // Summary fields only; the event log and ledger are not rendered here.
    const auto& src = results[i]->run;
    auto& r = out.emplace_back();
    r.mode = src.mode;
    r.seed = src.seed;
    r.periods = src.periods;
    r.counters = src.counters;
    r.audit = src.audit;
  }
  return out;
}

}  // namespace

extern "C" {

const char* hwmon_last_error(void) { return last_error.c_str(); }

const char* hwmon_version(void) { return "1.0.0"; }

void hwmon_string_free(char* s) { std::free(s); }

const char* hwmon_mode_name(int mode) {
  switch (mode) {
    case HWMON_MODE_COMBINED: return "combined";
    case HWMON_MODE_WSN_ONLY: return "wsn_only";
    default: return "unknown";
  }
}

int hwmon_mode_parse(const char* name, int* out_mode) {
  if (!name) return null_arg("name");
  if (!out_mode) return null_arg("out_mode");
  const auto m = hwmon::mode_from_name(name);
  if (!m) return fail(HWMON_E_INVALID_ARGUMENT, std::string("unknown mode '") + name + "' (combined, wsn_only)");
  *out_mode = *m == hwmon::Mode::Combined ? HWMON_MODE_COMBINED : HWMON_MODE_WSN_ONLY;
  last_error.clear();
  return HWMON_OK;
}

int hwmon_config_default(hwmon_config** out) {
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = new hwmon_config{};
    return HWMON_OK;
  });
}

int hwmon_config_load(const char* path, hwmon_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = new hwmon_config{hwmon::load_config(path)};
    return HWMON_OK;
  });
}

int hwmon_config_parse(const char* text, hwmon_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = new hwmon_config{hwmon::parse_config(text)};
    return HWMON_OK;
  });
}

int hwmon_config_clone(const hwmon_config* cfg, hwmon_config** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = new hwmon_config{*cfg};
    return HWMON_OK;
  });
}

int hwmon_config_set(hwmon_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&]() -> int {
    // Apply to a copy so a rejected value leaves the config untouched.
    auto next = cfg->cfg;
    hwmon::set_config_value(next, key, value);
    cfg->cfg = std::move(next);
    return HWMON_OK;
  });
}

int hwmon_config_get(const hwmon_config* cfg, const char* key, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::get_config_value(cfg->cfg, key));
    return HWMON_OK;
  });
}

int hwmon_config_get_double(const hwmon_config* cfg, const char* key, double* out) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    const auto text = hwmon::get_config_value(cfg->cfg, key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      return fail(HWMON_E_INVALID_ARGUMENT, std::string("key '") + key + "' is not numeric");
    *out = v;
    return HWMON_OK;
  });
}

int hwmon_config_validate(const hwmon_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&]() -> int {
    hwmon::require_valid(cfg->cfg);
    return HWMON_OK;
  });
}

int hwmon_config_to_text(const hwmon_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::config_to_text(cfg->cfg));
    return HWMON_OK;
  });
}

void hwmon_config_free(hwmon_config* cfg) { delete cfg; }

int hwmon_world_build(const hwmon_config* cfg, uint64_t seed, hwmon_world** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = new hwmon_world{hwmon::build_scenario(cfg->cfg, seed)};
    return HWMON_OK;
  });
}

int hwmon_world_dump(const hwmon_world* world, char** out) {
  if (!world) return null_arg("world");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::world_dump(world->world));
    return HWMON_OK;
  });
}

int hwmon_world_counts(const hwmon_world* world, size_t* rsus, size_t* subareas, size_t* sensors) {
  if (!world) return null_arg("world");
  if (rsus) *rsus = world->world.rsus.size();
  if (subareas) *subareas = world->world.subareas.size();
  if (sensors) *sensors = world->world.sensors.size();
  last_error.clear();
  return HWMON_OK;
}

void hwmon_world_free(hwmon_world* world) { delete world; }

int hwmon_run(const hwmon_world* world, int mode, int record_log, hwmon_result** out) {
  if (!world) return null_arg("world");
  if (!out) return null_arg("out");
  if (mode != HWMON_MODE_COMBINED && mode != HWMON_MODE_WSN_ONLY)
    return fail(HWMON_E_INVALID_ARGUMENT, "unknown mode " + std::to_string(mode));
  return guarded([&]() -> int {
    const auto m = mode == HWMON_MODE_COMBINED ? hwmon::Mode::Combined : hwmon::Mode::WsnOnly;
    hwmon::RunOptions opts;
    opts.record_log = record_log != 0;
    *out = new hwmon_result{hwmon::run(world->world, world->world.config.duration_s, m, opts)};
    return HWMON_OK;
  });
}

void hwmon_result_free(hwmon_result* result) { delete result; }

int hwmon_result_mode(const hwmon_result* r, int* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  *out = r->run.mode == hwmon::Mode::Combined ? HWMON_MODE_COMBINED : HWMON_MODE_WSN_ONLY;
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_seed(const hwmon_result* r, uint64_t* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  *out = r->run.seed;
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_mean_completion(const hwmon_result* r, double* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  const auto m = r->run.mean_completion_s();
  if (!m) return fail(HWMON_E_OUT_OF_RANGE, "no sensing period completed");
  *out = *m;
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_incomplete_periods(const hwmon_result* r, int* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  *out = r->run.incomplete_periods();
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_period_count(const hwmon_result* r, size_t* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  *out = r->run.periods.size();
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_period(const hwmon_result* r, size_t index, hwmon_period* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  if (index >= r->run.periods.size())
    return fail(HWMON_E_OUT_OF_RANGE, "period index " + std::to_string(index) + " out of range");
  const auto& p = r->run.periods[index];
  *out = hwmon_period{p.period, p.start_s, p.complete ? 1 : 0, p.completion_time_s, p.subareas_delivered,
                      p.subareas_total};
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_counters(const hwmon_result* r, hwmon_counters* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  const auto& c = r->run.counters;
  *out = hwmon_counters{c.tasks_created,  c.tasks_remote,       c.tasks_local,     c.tasks_raw_to_rsu,
                        c.tasks_delivered, c.batches,           c.batches_direct,  c.batches_relayed,
                        c.handoffs,       c.adv_messages,       c.adm_messages,    c.events_processed,
                        c.ch_changes_per_min, c.energy_tx_j,    c.energy_rx_j,     c.energy_sleep_j,
                        c.network_lifetime_s, c.end_time_s};
  last_error.clear();
  return HWMON_OK;
}

int hwmon_result_audit(const hwmon_result* r, int* out_ok, char** problems) {
  if (!r) return null_arg("result");
  if (!out_ok) return null_arg("out_ok");
  return guarded([&]() -> int {
    *out_ok = r->run.audit.ok() ? 1 : 0;
    if (problems) {
      std::string text;
      for (const auto& p : r->run.audit.problems) text += p + "\n";
      *problems = dup_string(text);
    }
    return HWMON_OK;
  });
}

int hwmon_metrics_csv(const hwmon_result* const* results, size_t n, char** out) {
  if (!results && n > 0) return null_arg("results");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::metrics_csv(gather(results, n)));
    return HWMON_OK;
  });
}

int hwmon_summary_csv(const hwmon_result* const* results, size_t n, char** out) {
  if (!results && n > 0) return null_arg("results");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::summary_csv(gather(results, n)));
    return HWMON_OK;
  });
}

int hwmon_event_log_csv(const hwmon_result* r, char** out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  return guarded([&]() -> int {
    *out = dup_string(hwmon::event_log_csv(r->run));
    return HWMON_OK;
  });
}

int hwmon_write_file(const char* path, const char* content) {
  if (!path) return null_arg("path");
  if (!content) return null_arg("content");
  return guarded([&]() -> int {
    hwmon::write_file_atomic(path, content);
    return HWMON_OK;
  });
}

}  // extern "C"
