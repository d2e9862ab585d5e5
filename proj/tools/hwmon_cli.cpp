// Command-line front end: single runs, WSN-only comparison, parameter sweeps.
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hwmon/hwmon.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 2, kMissingFile = 3, kInvalidConfig = 4, kUnwritable = 5, kRuntime = 6 };

struct CliError {
  int code;
  std::string message;
};

struct ConfigDeleter {
  void operator()(hwmon_config* c) const { hwmon_config_free(c); }
};
struct WorldDeleter {
  void operator()(hwmon_world* w) const { hwmon_world_free(w); }
};
struct ResultDeleter {
  void operator()(hwmon_result* r) const { hwmon_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { hwmon_string_free(s); }
};
using ConfigPtr = std::unique_ptr<hwmon_config, ConfigDeleter>;
using WorldPtr = std::unique_ptr<hwmon_world, WorldDeleter>;
using ResultPtr = std::unique_ptr<hwmon_result, ResultDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

int exit_for_status(int status) {
  switch (status) {
    case HWMON_E_INVALID_CONFIG:
    case HWMON_E_PARSE: return kInvalidConfig;
    case HWMON_E_IO: return kUnwritable;
    case HWMON_E_INVALID_ARGUMENT: return kUsage;
    default: return kRuntime;
  }
}

void check(int status, const std::string& context) {
  if (status != HWMON_OK) throw CliError{exit_for_status(status), context + ": " + hwmon_last_error()};
}

std::string take(char* s) {
  CString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

// ---------------------------------------------------------------------------
// Sweep description stored in an optional [sweep] table of the scenario file.

struct SweepSpec {
  std::string variable = "X";
  std::vector<double> values;
  std::vector<double> x_values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> modes;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string raw) {
  raw = trim(raw);
  if (!raw.empty() && raw.front() == '[') raw = raw.substr(1);
  if (!raw.empty() && raw.back() == ']') raw.pop_back();
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw CliError{kInvalidConfig, "sweep." + key + ": '" + s + "' is not a number"};
  return v;
}

struct ScenarioFile {
  std::string scenario_text;
  std::optional<SweepSpec> sweep;
};

ScenarioFile read_scenario_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw CliError{kMissingFile, "config file not found: " + path};
  std::ifstream in(path);
  if (!in) throw CliError{kMissingFile, "cannot read config file: " + path};
  ScenarioFile f;
  std::string line;
  bool in_sweep = false;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (!t.empty() && t.front() == '[' && t.back() == ']' && t.find(',') == std::string::npos) {
      in_sweep = trim(t.substr(1, t.size() - 2)) == "sweep";
      if (in_sweep) {
        if (!f.sweep) f.sweep.emplace();
        continue;
      }
    }
    if (!in_sweep) {
      f.scenario_text += line + "\n";
      continue;
    }
    const auto hash = t.find('#');
    const auto body = trim(t.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw CliError{kInvalidConfig, "sweep table: expected 'key = value', got '" + body + "'"};
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    auto& s = *f.sweep;
    if (key == "variable") {
      const auto v = split_list(value);
      if (v.size() != 1) throw CliError{kInvalidConfig, "sweep.variable: expected one of X, Y, L"};
      s.variable = v.front();
    } else if (key == "values") {
      for (const auto& v : split_list(value)) s.values.push_back(to_number(key, v));
    } else if (key == "x_values") {
      for (const auto& v : split_list(value)) s.x_values.push_back(to_number(key, v));
    } else if (key == "seeds") {
      for (const auto& v : split_list(value)) {
        const double d = to_number(key, v);
        if (d < 0 || d != std::floor(d)) throw CliError{kInvalidConfig, "sweep.seeds: '" + v + "' is not a seed"};
        s.seeds.push_back(static_cast<std::uint64_t>(d));
      }
    } else if (key == "modes") {
      s.modes = split_list(value);
    } else {
      throw CliError{kInvalidConfig, "sweep table: unknown key '" + key + "'"};
    }
  }
  return f;
}

ConfigPtr parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  hwmon_config* raw = nullptr;
  check(hwmon_config_parse(text.c_str(), &raw), "config");
  ConfigPtr cfg(raw);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw CliError{kUsage, "--set expects key=value, got '" + o + "'"};
    const auto st = hwmon_config_set(cfg.get(), trim(o.substr(0, eq)).c_str(), trim(o.substr(eq + 1)).c_str());
    if (st != HWMON_OK) throw CliError{kInvalidConfig, std::string("--set ") + o + ": " + hwmon_last_error()};
  }
  return cfg;
}

void validate_config(const hwmon_config* cfg, const std::string& context) {
  if (hwmon_config_validate(cfg) != HWMON_OK)
    throw CliError{kInvalidConfig, context + hwmon_last_error()};
}

int parse_mode(const std::string& name) {
  int m = 0;
  if (hwmon_mode_parse(name.c_str(), &m) != HWMON_OK) throw CliError{kUsage, hwmon_last_error()};
  return m;
}

std::vector<int> parse_modes(const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) {
    if (n == "both") {
      out.push_back(HWMON_MODE_COMBINED);
      out.push_back(HWMON_MODE_WSN_ONLY);
    } else {
      out.push_back(parse_mode(n));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Output directory handling.

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HWMON_OUT_DIR"); env && *env) return env;
  return "out";
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw CliError{kUnwritable, "cannot create output directory: " + dir};
  const auto probe = (fs::path(dir) / ".hwmon_probe").string();
  if (hwmon_write_file(probe.c_str(), "") != HWMON_OK)
    throw CliError{kUnwritable, "output directory is not writable: " + dir};
  fs::remove(probe, ec);
}

void write_out(const std::string& dir, const std::string& name, const std::string& content) {
  const auto path = (fs::path(dir) / name).string();
  if (hwmon_write_file(path.c_str(), content.c_str()) != HWMON_OK)
    throw CliError{kUnwritable, std::string("cannot write ") + path + ": " + hwmon_last_error()};
}

// ---------------------------------------------------------------------------
// Run jobs, optionally on a small worker pool. Results keep job order.

struct Job {
  ConfigPtr cfg;
  std::uint64_t seed = 0;
  int mode = HWMON_MODE_COMBINED;
  bool record_log = false;
  ResultPtr result;
  std::string error;
  int status = HWMON_OK;
};

void execute(Job& job) {
  hwmon_world* w = nullptr;
  int st = hwmon_world_build(job.cfg.get(), job.seed, &w);
  if (st != HWMON_OK) {
    job.status = st;
    job.error = hwmon_last_error();
    return;
  }
  WorldPtr world(w);
  hwmon_result* r = nullptr;
  st = hwmon_run(world.get(), job.mode, job.record_log ? 1 : 0, &r);
  if (st != HWMON_OK) {
    job.status = st;
    job.error = hwmon_last_error();
    return;
  }
  job.result.reset(r);
}

void run_jobs(std::vector<Job>& jobs, int workers, bool progress) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex out_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      execute(jobs[i]);
      const auto d = ++done;
      if (progress) {
        std::lock_guard lock(out_mu);
        std::fprintf(stderr, "\r[%zu/%zu] runs", d, jobs.size());
        if (d == jobs.size()) std::fprintf(stderr, "\n");
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& j : jobs)
    if (j.status != HWMON_OK)
      throw CliError{exit_for_status(j.status) == kUsage ? kRuntime : exit_for_status(j.status),
                     "run (seed " + std::to_string(j.seed) + ", " + hwmon_mode_name(j.mode) + ") failed: " + j.error};
}

// Audit failures are reported after all output is written.
bool report_audits(const std::vector<Job>& jobs) {
  bool ok = true;
  for (const auto& j : jobs) {
    int audit_ok = 0;
    char* problems = nullptr;
    check(hwmon_result_audit(j.result.get(), &audit_ok, &problems), "audit");
    const auto text = take(problems);
    if (!audit_ok) {
      ok = false;
      std::fprintf(stderr, "audit failed (seed %llu, %s):\n%s", static_cast<unsigned long long>(j.seed),
                   hwmon_mode_name(j.mode), text.c_str());
    }
  }
  return ok;
}

std::optional<double> mean_of(const Job& j) {
  double m = 0.0;
  if (hwmon_result_mean_completion(j.result.get(), &m) != HWMON_OK) return std::nullopt;
  return m;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string metrics_of(const std::vector<Job>& jobs) {
  std::vector<const hwmon_result*> rs;
  for (const auto& j : jobs) rs.push_back(j.result.get());
  char* out = nullptr;
  check(hwmon_metrics_csv(rs.data(), rs.size(), &out), "metrics");
  return take(out);
}

std::string summary_of(const std::vector<Job>& jobs) {
  std::vector<const hwmon_result*> rs;
  for (const auto& j : jobs) rs.push_back(j.result.get());
  char* out = nullptr;
  check(hwmon_summary_csv(rs.data(), rs.size(), &out), "summary");
  return take(out);
}

ConfigPtr clone(const hwmon_config* cfg) {
  hwmon_config* raw = nullptr;
  check(hwmon_config_clone(cfg, &raw), "config");
  return ConfigPtr(raw);
}

void set_number(hwmon_config* cfg, const char* key, double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  check(hwmon_config_set(cfg, key, os.str().c_str()), key);
}

const char* key_for(const std::string& variable) {
  if (variable == "X") return "rsu_spacing_km";
  if (variable == "Y") return "vbp_spacing_m";
  if (variable == "L") return "road_length_km";
  throw CliError{kUsage, "sweep variable must be X, Y or L, got '" + variable + "'"};
}

double get_number(const hwmon_config* cfg, const char* key) {
  double v = 0.0;
  check(hwmon_config_get_double(cfg, key, &v), key);
  return v;
}

// ---------------------------------------------------------------------------
// Commands.

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_seeds) {
  cmd->add_option("-c,--config", c.config, "scenario file")->required();
  cmd->add_option("--set", c.overrides, "override a configuration key (key=value), repeatable");
  if (with_seeds) {
    cmd->add_option("-o,--out", c.out, "output directory (default: $HWMON_OUT_DIR or ./out)");
    cmd->add_option("-s,--seeds", c.seeds, "seeds to run")->delimiter(',');
    cmd->add_option("-j,--jobs", c.jobs, "parallel runs")->check(CLI::Range(1, 256));
    cmd->add_flag("-q,--quiet", c.quiet, "no progress output");
  }
}

std::vector<std::uint64_t> seeds_or(const Common& c, const ScenarioFile& f, const hwmon_config* cfg) {
  if (!c.seeds.empty()) return c.seeds;
  if (f.sweep && !f.sweep->seeds.empty()) return f.sweep->seeds;
  return {static_cast<std::uint64_t>(get_number(cfg, "seed"))};
}

int cmd_run(const Common& c, const std::string& mode_name, bool no_log) {
  const auto file = read_scenario_file(c.config);
  auto cfg = parse_scenario(file.scenario_text, c.overrides);
  validate_config(cfg.get(), "");
  const auto dir = resolve_out_dir(c.out);
  prepare_out_dir(dir);

  std::vector<Job> jobs;
  for (auto seed : seeds_or(c, file, cfg.get()))
    for (int m : parse_modes({mode_name})) {
      Job j;
      j.cfg = clone(cfg.get());
      j.seed = seed;
      j.mode = m;
      j.record_log = !no_log;
      jobs.push_back(std::move(j));
    }
  run_jobs(jobs, c.jobs, !c.quiet);

  write_out(dir, "metrics.csv", metrics_of(jobs));
  write_out(dir, "summary.csv", summary_of(jobs));
  if (!no_log)
    for (const auto& j : jobs) {
      char* log = nullptr;
      check(hwmon_event_log_csv(j.result.get(), &log), "event log");
      write_out(dir, std::string("events_") + hwmon_mode_name(j.mode) + "_seed" + std::to_string(j.seed) + ".csv",
                take(log));
    }
  for (const auto& j : jobs) {
    const auto m = mean_of(j);
    std::printf("%s seed=%llu mean_completion_s=%s\n", hwmon_mode_name(j.mode), static_cast<unsigned long long>(j.seed),
                m ? fixed(*m).c_str() : "incomplete");
  }
  return report_audits(jobs) ? kOk : kRuntime;
}

int cmd_compare(const Common& c, std::vector<double> xs) {
  const auto file = read_scenario_file(c.config);
  auto cfg = parse_scenario(file.scenario_text, c.overrides);
  if (xs.empty() && file.sweep && file.sweep->variable == "X") xs = file.sweep->values;
  if (xs.empty()) xs.push_back(get_number(cfg.get(), "rsu_spacing_km"));
  for (double x : xs) {
    auto probe = clone(cfg.get());
    set_number(probe.get(), "rsu_spacing_km", x);
    validate_config(probe.get(), "X=" + fixed(x) + ": ");
  }
  const auto seeds = seeds_or(c, file, cfg.get());
  const auto dir = resolve_out_dir(c.out);
  prepare_out_dir(dir);

  std::vector<Job> jobs;
  for (double x : xs)
    for (auto seed : seeds)
      for (int m : {HWMON_MODE_COMBINED, HWMON_MODE_WSN_ONLY}) {
        Job j;
        j.cfg = clone(cfg.get());
        set_number(j.cfg.get(), "rsu_spacing_km", x);
        j.seed = seed;
        j.mode = m;
        jobs.push_back(std::move(j));
      }
  run_jobs(jobs, c.jobs, !c.quiet);

  std::ostringstream os;
  os << "X,seeds,combined_mean_s,wsn_only_mean_s,improvement_pct\n";
  std::size_t k = 0;
  for (double x : xs) {
    double sum[2] = {0.0, 0.0};
    int n[2] = {0, 0};
    for (std::size_t s = 0; s < seeds.size(); ++s)
      for (int m = 0; m < 2; ++m, ++k)
        if (const auto v = mean_of(jobs[k])) {
          sum[m] += *v;
          ++n[m];
        }
    os << fixed(x) << ',' << seeds.size() << ',';
    if (n[0] && n[1]) {
      const double comb = sum[0] / n[0];
      const double wsn = sum[1] / n[1];
      os << fixed(comb) << ',' << fixed(wsn) << ',' << fixed(100.0 * (wsn - comb) / wsn) << '\n';
      std::printf("X=%g combined=%.3f s wsn_only=%.3f s improvement=%.2f%%\n", x, comb, wsn, 100.0 * (wsn - comb) / wsn);
    } else {
      os << ",,\n";
      std::printf("X=%g incomplete\n", x);
    }
  }
  write_out(dir, "compare.csv", os.str());
  write_out(dir, "metrics.csv", metrics_of(jobs));
  write_out(dir, "summary.csv", summary_of(jobs));
  return report_audits(jobs) ? kOk : kRuntime;
}

struct SweepArgs {
  std::string variable;
  std::vector<double> values;
  std::vector<double> x_values;
  std::vector<std::string> modes;
};

int cmd_sweep(const Common& c, SweepArgs a) {
  const auto file = read_scenario_file(c.config);
  auto cfg = parse_scenario(file.scenario_text, c.overrides);
  const SweepSpec spec = file.sweep.value_or(SweepSpec{});
  if (a.variable.empty()) a.variable = spec.variable;
  if (a.values.empty()) a.values = spec.values;
  if (a.x_values.empty()) a.x_values = spec.x_values;
  if (a.modes.empty()) a.modes = spec.modes;
  if (a.modes.empty()) a.modes = {"combined"};
  if (a.values.empty()) throw CliError{kInvalidConfig, "sweep needs at least one value"};
  const char* key = key_for(a.variable);
  if (a.variable == "X" || a.x_values.empty()) a.x_values = {get_number(cfg.get(), "rsu_spacing_km")};
  const auto modes = parse_modes(a.modes);
  const auto seeds = seeds_or(c, file, cfg.get());

  struct Point {
    double value;
    double x;
  };
  std::vector<Point> points;
  for (double x : a.x_values)
    for (double v : a.values) points.push_back({v, a.variable == "X" ? v : x});

  for (const auto& p : points) {
    auto probe = clone(cfg.get());
    set_number(probe.get(), "rsu_spacing_km", p.x);
    set_number(probe.get(), key, p.value);
    validate_config(probe.get(), a.variable + "=" + fixed(p.value) + ", X=" + fixed(p.x) + ": ");
  }
  const auto dir = resolve_out_dir(c.out);
  prepare_out_dir(dir);

  std::vector<Job> jobs;
  for (const auto& p : points)
    for (int m : modes)
      for (auto seed : seeds) {
        Job j;
        j.cfg = clone(cfg.get());
        set_number(j.cfg.get(), "rsu_spacing_km", p.x);
        set_number(j.cfg.get(), key, p.value);
        j.seed = seed;
        j.mode = m;
        jobs.push_back(std::move(j));
      }
  run_jobs(jobs, c.jobs, !c.quiet);

  std::ostringstream rows, agg;
  rows << "variable,value,X,mode,seed,period,completion_time_s\n";
  agg << "variable,value,X,mode,seeds,mean_completion_s\n";
  std::size_t k = 0;
  for (const auto& p : points)
    for (int m : modes) {
      double sum = 0.0;
      int n = 0;
      for (auto seed : seeds) {
        const auto& j = jobs[k++];
        std::size_t periods = 0;
        check(hwmon_result_period_count(j.result.get(), &periods), "periods");
        for (std::size_t i = 0; i < periods; ++i) {
          hwmon_period pm{};
          check(hwmon_result_period(j.result.get(), i, &pm), "period");
          rows << a.variable << ',' << fixed(p.value) << ',' << fixed(p.x) << ',' << hwmon_mode_name(m) << ',' << seed
               << ',' << pm.period << ',' << (pm.complete ? fixed(pm.completion_time_s) : "") << '\n';
        }
        if (const auto v = mean_of(j)) {
          sum += *v;
          ++n;
        }
      }
      agg << a.variable << ',' << fixed(p.value) << ',' << fixed(p.x) << ',' << hwmon_mode_name(m) << ','
          << seeds.size() << ',' << (n ? fixed(sum / n) : "") << '\n';
      std::printf("%s=%g X=%g %s mean=%s\n", a.variable.c_str(), p.value, p.x, hwmon_mode_name(m),
                  n ? fixed(sum / n).c_str() : "incomplete");
    }
  write_out(dir, "sweep.csv", rows.str());
  write_out(dir, "sweep_summary.csv", agg.str());
  write_out(dir, "summary.csv", summary_of(jobs));
  return report_audits(jobs) ? kOk : kRuntime;
}

int cmd_validate(const Common& c) {
  const auto file = read_scenario_file(c.config);
  auto cfg = parse_scenario(file.scenario_text, c.overrides);
  validate_config(cfg.get(), "");
  std::printf("%s: ok\n", c.config.c_str());
  return kOk;
}

int cmd_dump_world(const Common& c, std::optional<std::uint64_t> seed, const std::string& out_file) {
  const auto file = read_scenario_file(c.config);
  auto cfg = parse_scenario(file.scenario_text, c.overrides);
  validate_config(cfg.get(), "");
  hwmon_world* w = nullptr;
  check(hwmon_world_build(cfg.get(), seed.value_or(static_cast<std::uint64_t>(get_number(cfg.get(), "seed"))), &w),
        "world");
  WorldPtr world(w);
  char* text = nullptr;
  check(hwmon_world_dump(world.get(), &text), "dump");
  const auto dump = take(text);
  if (out_file.empty()) {
    std::fwrite(dump.data(), 1, dump.size(), stdout);
  } else if (hwmon_write_file(out_file.c_str(), dump.c_str()) != HWMON_OK) {
    throw CliError{kUnwritable, std::string("cannot write ") + out_file + ": " + hwmon_last_error()};
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Highway air-quality monitoring simulator (WSN + VANET offloading)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hwmon_version()));

  Common run_c, cmp_c, sweep_c, val_c, dump_c;
  std::string run_mode = "combined";
  bool run_no_log = false;
  auto* run = app.add_subcommand("run", "run one scenario and write metrics and event logs");
  add_common(run, run_c, true);
  run->add_option("-m,--mode", run_mode, "combined, wsn_only or both");
  run->add_flag("--no-log", run_no_log, "skip event-log CSVs");

  std::vector<double> cmp_x;
  auto* cmp = app.add_subcommand("compare", "Combined vs WSN-only completion time on identical worlds");
  add_common(cmp, cmp_c, true);
  cmp->add_option("-x,--x-values", cmp_x, "RSU spacings X in km")->delimiter(',');

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "cartesian sweep over X, Y or L; tidy CSV output");
  add_common(sweep, sweep_c, true);
  sweep->add_option("--variable", sw.variable, "X, Y or L")->check(CLI::IsMember({"X", "Y", "L"}));
  sweep->add_option("--values", sw.values, "values of the swept variable")->delimiter(',');
  sweep->add_option("-x,--x-values", sw.x_values, "RSU spacings X to cross with Y or L")->delimiter(',');
  sweep->add_option("-m,--modes", sw.modes, "combined, wsn_only or both")->delimiter(',');

  auto* val = app.add_subcommand("validate", "check a scenario file");
  add_common(val, val_c, false);

  std::optional<std::uint64_t> dump_seed;
  std::string dump_out;
  auto* dump = app.add_subcommand("dump-world", "print the deployed world");
  add_common(dump, dump_c, false);
  dump->add_option("--seed", dump_seed, "deployment seed (default: config seed)");
  dump->add_option("-o,--out", dump_out, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_c, run_mode, run_no_log);
    if (*cmp) return cmd_compare(cmp_c, cmp_x);
    if (*sweep) return cmd_sweep(sweep_c, sw);
    if (*val) return cmd_validate(val_c);
    if (*dump) return cmd_dump_world(dump_c, dump_seed, dump_out);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  }
  return kUsage;
}
