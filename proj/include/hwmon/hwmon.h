/* C interface to the highway air-quality monitoring simulator.
 *
 * Every function returning int returns HWMON_OK or one of the HWMON_E_* codes.
 * On failure hwmon_last_error() describes the problem (per thread). Strings
 * handed out by the library are released with hwmon_string_free. */
#ifndef HWMON_H
#define HWMON_H

#include <stddef.h>
#include <stdint.h>

#if defined(HWMON_BUILDING_LIBRARY)
#define HWMON_API __attribute__((visibility("default")))
#else
#define HWMON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  HWMON_OK = 0,
  HWMON_E_INVALID_ARGUMENT = 1,
  HWMON_E_INVALID_CONFIG = 2,
  HWMON_E_IO = 3,
  HWMON_E_PARSE = 4,
  HWMON_E_OUT_OF_RANGE = 5,
  HWMON_E_CORRUPT = 6,
  HWMON_E_AUDIT = 7,
  HWMON_E_INTERNAL = 99
};

typedef enum { HWMON_MODE_COMBINED = 0, HWMON_MODE_WSN_ONLY = 1 } hwmon_mode;

typedef struct hwmon_config hwmon_config;
typedef struct hwmon_world hwmon_world;
typedef struct hwmon_result hwmon_result;

typedef struct {
  int period;
  double start_s;
  int complete;
  double completion_time_s; /* meaningful only when complete */
  int subareas_delivered;
  int subareas_total;
} hwmon_period;

typedef struct {
  uint64_t tasks_created;
  uint64_t tasks_remote;
  uint64_t tasks_local;
  uint64_t tasks_raw_to_rsu;
  uint64_t tasks_delivered;
  uint64_t batches;
  uint64_t batches_direct;
  uint64_t batches_relayed;
  uint64_t handoffs;
  uint64_t adv_messages;
  uint64_t adm_messages;
  uint64_t events_processed;
  double ch_changes_per_min;
  double energy_tx_j;
  double energy_rx_j;
  double energy_sleep_j;
  double network_lifetime_s; /* +inf when no sensor died */
  double end_time_s;
} hwmon_counters;

HWMON_API const char* hwmon_last_error(void);
HWMON_API const char* hwmon_version(void);
HWMON_API void hwmon_string_free(char* s);
HWMON_API const char* hwmon_mode_name(int mode);
HWMON_API int hwmon_mode_parse(const char* name, int* out_mode);

/* configuration */
HWMON_API int hwmon_config_default(hwmon_config** out);
HWMON_API int hwmon_config_load(const char* path, hwmon_config** out);
HWMON_API int hwmon_config_parse(const char* text, hwmon_config** out);
HWMON_API int hwmon_config_clone(const hwmon_config* cfg, hwmon_config** out);
HWMON_API int hwmon_config_set(hwmon_config* cfg, const char* key, const char* value);
HWMON_API int hwmon_config_get(const hwmon_config* cfg, const char* key, char** out);
HWMON_API int hwmon_config_get_double(const hwmon_config* cfg, const char* key, double* out);
/* HWMON_E_INVALID_CONFIG with every issue listed in hwmon_last_error(). */
HWMON_API int hwmon_config_validate(const hwmon_config* cfg);
HWMON_API int hwmon_config_to_text(const hwmon_config* cfg, char** out);
HWMON_API void hwmon_config_free(hwmon_config* cfg);

/* deployment */
HWMON_API int hwmon_world_build(const hwmon_config* cfg, uint64_t seed, hwmon_world** out);
HWMON_API int hwmon_world_dump(const hwmon_world* world, char** out);
HWMON_API int hwmon_world_counts(const hwmon_world* world, size_t* rsus, size_t* subareas, size_t* sensors);
HWMON_API void hwmon_world_free(hwmon_world* world);

/* simulation; the world is not modified */
HWMON_API int hwmon_run(const hwmon_world* world, int mode, int record_log, hwmon_result** out);
HWMON_API void hwmon_result_free(hwmon_result* result);

HWMON_API int hwmon_result_mode(const hwmon_result* r, int* out);
HWMON_API int hwmon_result_seed(const hwmon_result* r, uint64_t* out);
/* HWMON_E_OUT_OF_RANGE when no period completed. */
HWMON_API int hwmon_result_mean_completion(const hwmon_result* r, double* out);
HWMON_API int hwmon_result_incomplete_periods(const hwmon_result* r, int* out);
HWMON_API int hwmon_result_period_count(const hwmon_result* r, size_t* out);
HWMON_API int hwmon_result_period(const hwmon_result* r, size_t index, hwmon_period* out);
HWMON_API int hwmon_result_counters(const hwmon_result* r, hwmon_counters* out);
/* out_ok = 1 when every conservation and structure check passed; problems may be NULL. */
HWMON_API int hwmon_result_audit(const hwmon_result* r, int* out_ok, char** problems);

/* CSV renderings */
HWMON_API int hwmon_metrics_csv(const hwmon_result* const* results, size_t n, char** out);
HWMON_API int hwmon_summary_csv(const hwmon_result* const* results, size_t n, char** out);
HWMON_API int hwmon_event_log_csv(const hwmon_result* r, char** out);

/* Atomic write: temporary file then rename. */
HWMON_API int hwmon_write_file(const char* path, const char* content);

#ifdef __cplusplus
}
#endif

#endif
