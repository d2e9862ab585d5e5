#include "hwmon/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hwmon {

std::string format_fixed(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string metrics_csv(std::span<const RunResult> runs) {
  std::ostringstream os;
  os << "mode,seed,period,start_s,complete,completion_time_s,subareas_delivered,subareas_total\n";
  for (const auto& r : runs)
    for (const auto& p : r.periods)
      os << mode_name(r.mode) << ',' << r.seed << ',' << p.period << ',' << format_fixed(p.start_s) << ','
         << (p.complete ? 1 : 0) << ',' << (p.complete ? format_fixed(p.completion_time_s) : "") << ','
         << p.subareas_delivered << ',' << p.subareas_total << '\n';
  return os.str();
}

std::string summary_csv(std::span<const RunResult> runs) {
  std::ostringstream os;
  os << "mode,seed,mean_completion_s,incomplete_periods,tasks_created,tasks_remote,tasks_local,tasks_raw_to_rsu,"
        "tasks_delivered,batches,batches_direct,batches_relayed,handoffs,adv_messages,adm_messages,"
        "ch_changes_per_min,energy_tx_j,energy_rx_j,energy_sleep_j,network_lifetime_s,audit_ok\n";
  for (const auto& r : runs) {
    const auto& c = r.counters;
    const auto mean = r.mean_completion_s();
    os << mode_name(r.mode) << ',' << r.seed << ',' << (mean ? format_fixed(*mean) : "") << ','
       << r.incomplete_periods() << ',' << c.tasks_created << ',' << c.tasks_remote << ',' << c.tasks_local << ','
       << c.tasks_raw_to_rsu << ',' << c.tasks_delivered << ',' << c.batches << ',' << c.batches_direct << ','
       << c.batches_relayed << ',' << c.handoffs << ',' << c.adv_messages << ',' << c.adm_messages << ','
       << format_fixed(c.ch_changes_per_min) << ',' << format_fixed(c.energy_tx_j) << ','
       << format_fixed(c.energy_rx_j) << ',' << format_fixed(c.energy_sleep_j) << ','
       << format_fixed(c.network_lifetime_s) << ',' << (r.audit.ok() ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string event_log_csv(const RunResult& run) {
  std::ostringstream os;
  os << "time_s,actor,event,task_id,period,detail\n";
  for (const auto& row : run.log) {
    os << format_fixed(row.time_s) << ',' << static_cast<char>(row.actor) << ':' << row.actor_id << ','
       << log_event_name(row.event) << ',';
    if (row.task) os << *row.task;
    os << ',' << row.period << ',' << row.detail << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move '" + tmp.string() + "' into place");
  }
}

}  // namespace hwmon
