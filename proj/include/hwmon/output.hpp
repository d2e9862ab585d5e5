// CSV renderings of run results and atomic file output.
#pragma once

#include <span>
#include <string>

#include "hwmon/engine.hpp"

namespace hwmon {

/// mode,seed,period,start_s,complete,completion_time_s,subareas_delivered,subareas_total
std::string metrics_csv(std::span<const RunResult> runs);

/// One row per run with the averaged completion time, counters and audit status.
std::string summary_csv(std::span<const RunResult> runs);

/// time_s,actor,event,task_id,period,detail
std::string event_log_csv(const RunResult& run);

/// Fixed six-decimal rendering used by every CSV column.
std::string format_fixed(double v);

/// Writes to a sibling temporary file and renames it into place, so readers
/// never observe a partial file. Throws Error(Io).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hwmon
