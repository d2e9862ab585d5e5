// Plain-text scenario files: TOML-compatible "key = value" lines grouped in
// [section] tables. Section names prefix the keys ("[radio]" + "bitrate_bps"
// is the key "radio.bitrate_bps"), so a flat "radio.bitrate_bps = ..." line is
// accepted as well.
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "hwmon/core.hpp"

namespace hwmon {
namespace {

struct KeyEntry {
  ConfigKeyDoc doc;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(std::string_view key, std::string_view raw) {
  const std::string s(unquote(trim(raw)));
  // TOML allows '_' as a digit separator.
  std::string cleaned;
  for (char c : s)
    if (c != '_') cleaned.push_back(c);
  try {
    std::size_t used = 0;
    const double v = std::stod(cleaned, &used);
    if (used != cleaned.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "key '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
}

long long parse_integer(std::string_view key, std::string_view raw) {
  const double v = parse_double(key, raw);
  if (v != std::floor(v) || std::abs(v) > 9.0e15)
    throw Error(ErrorCode::Parse, "key '" + std::string(key) + "': expected an integer");
  return static_cast<long long>(v);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class Member>
KeyEntry real_key(std::string key, std::string unit, std::string desc, Member member) {
  return {{key, std::move(unit), std::move(desc)},
          [key, member](ScenarioConfig& c, std::string_view v) { member(c) = parse_double(key, v); },
          [member](const ScenarioConfig& c) { return fmt_double(member(const_cast<ScenarioConfig&>(c))); }};
}

template <class Member>
KeyEntry int_key(std::string key, std::string unit, std::string desc, Member member) {
  return {{key, std::move(unit), std::move(desc)},
          [key, member](ScenarioConfig& c, std::string_view v) {
            const long long n = parse_integer(key, v);
            if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
              throw Error(ErrorCode::Parse, "key '" + key + "': integer out of range");
            member(c) = static_cast<int>(n);
          },
          [member](const ScenarioConfig& c) { return std::to_string(member(const_cast<ScenarioConfig&>(c))); }};
}

#define HW_REAL(key, unit, desc, expr) real_key(key, unit, desc, [](ScenarioConfig& c) -> double& { return expr; })
#define HW_INT(key, unit, desc, expr) int_key(key, unit, desc, [](ScenarioConfig& c) -> int& { return expr; })

std::vector<KeyEntry> build_registry() {
  std::vector<KeyEntry> r;
  r.push_back(HW_REAL("road_length_km", "km", "highway length L", c.road_length_km));
  r.push_back(HW_REAL("rsu_spacing_km", "km", "RSU/MEC spacing X, supported 1..10", c.rsu_spacing_km));
  r.push_back(HW_REAL("vbp_spacing_m", "m", "virtual base point spacing Y, supported 250..2500", c.vbp_spacing_m));
  r.push_back(HW_INT("sensors_per_subarea", "count", "sensors per sub-area Z; 0 derives it from density_factor",
                     c.sensors_per_subarea));
  r.push_back(HW_REAL("density_factor", "-", "density factor f used when Z = 0", c.density_factor));
  r.push_back(HW_REAL("base_density_per_km2", "1/km2", "sensor density at f = 1", c.base_density_per_km2));
  r.push_back(HW_REAL("subarea_depth_m", "m", "sub-area depth away from the road", c.subarea_depth_m));
  r.push_back(HW_INT("lanes_per_direction", "count", "lanes per direction of travel", c.lanes_per_direction));
  r.push_back(HW_REAL("lane_width_m", "m", "lane width", c.lane_width_m));
  r.push_back({{"sensor_range_m", "m", "sensor radio range R (also sets wsn.range_m)"},
               [](ScenarioConfig& c, std::string_view v) {
                 c.sensor_range_m = parse_double("sensor_range_m", v);
                 c.clustering.range_m = c.sensor_range_m;
               },
               [](const ScenarioConfig& c) { return fmt_double(c.sensor_range_m); }});
  r.push_back(HW_REAL("sensing_period_s", "s", "sensing period", c.sensing_period_s));
  r.push_back(HW_REAL("adv_period_s", "s", "rendezvous node advertisement period", c.adv_period_s));
  r.push_back(HW_REAL("fa_update_period_s", "s", "cluster-head ability-flag broadcast period", c.fa_update_period_s));
  r.push_back(HW_REAL("mobility_dt_s", "s", "mobility integration step", c.mobility_dt_s));
  r.push_back(HW_INT("reformation_factor", "periods", "WSN re-clustering every N sensing periods",
                     c.reformation_factor));
  r.push_back(HW_REAL("duration_s", "s", "sensing ticks are issued for t < duration_s", c.duration_s));
  r.push_back(HW_REAL("drain_s", "s", "extra time allowed for outstanding periods to complete", c.drain_s));
  r.push_back({{"seed", "-", "random seed"},
               [](ScenarioConfig& c, std::string_view v) {
                 const long long n = parse_integer("seed", v);
                 if (n < 0) throw Error(ErrorCode::Parse, "key 'seed': must be >= 0");
                 c.seed = static_cast<std::uint64_t>(n);
               },
               [](const ScenarioConfig& c) { return std::to_string(c.seed); }});

  r.push_back(HW_REAL("wsn.forwarding_angle_deg", "deg", "forwarding cone angle theta",
                      c.clustering.forwarding_angle_deg));
  r.push_back({{"wsn.range_m", "m", "clustering radius R (also sets sensor_range_m)"},
               [](ScenarioConfig& c, std::string_view v) {
                 c.clustering.range_m = parse_double("wsn.range_m", v);
                 c.sensor_range_m = c.clustering.range_m;
               },
               [](const ScenarioConfig& c) { return fmt_double(c.clustering.range_m); }});
  r.push_back(HW_REAL("wsn.initial_energy_j", "J", "initial sensor energy", c.clustering.initial_energy_j));
  r.push_back({{"wsn.tx_model", "-", "transmit power vs distance: linear | quadratic"},
               [](ScenarioConfig& c, std::string_view v) {
                 const auto s = unquote(trim(v));
                 if (s == "linear")
                   c.clustering.tx_model = TxPowerModel::Linear;
                 else if (s == "quadratic")
                   c.clustering.tx_model = TxPowerModel::Quadratic;
                 else
                   throw Error(ErrorCode::Parse, "key 'wsn.tx_model': expected linear or quadratic");
               },
               [](const ScenarioConfig& c) {
                 return std::string(c.clustering.tx_model == TxPowerModel::Linear ? "\"linear\"" : "\"quadratic\"");
               }});

  r.push_back(HW_REAL("vanet.c1", "-", "speed-difference weight in MD", c.vanet.c1));
  r.push_back(HW_REAL("vanet.c2", "-", "acceleration-difference weight in MD", c.vanet.c2));
  r.push_back(HW_REAL("vanet.alpha", "-", "SF weight of average speed difference", c.vanet.alpha));
  r.push_back(HW_REAL("vanet.beta", "-", "SF weight of average acceleration difference", c.vanet.beta));
  r.push_back(HW_REAL("vanet.gamma", "-", "SF weight of average distance", c.vanet.gamma));
  r.push_back(HW_REAL("vanet.delta", "-", "SF weight of degree", c.vanet.delta));
  r.push_back(HW_REAL("vanet.md_threshold", "-", "MD threshold T_s (inclusive)", c.vanet.md_threshold));
  r.push_back(HW_REAL("vanet.v2v_range_m", "m", "V2V radio range", c.vanet.v2v_range_m));
  r.push_back(HW_REAL("vanet.max_speed_diff_mps", "m/s", "speed difference normalisation cap",
                      c.vanet.max_speed_diff_mps));
  r.push_back(HW_REAL("vanet.max_accel_diff_mps2", "m/s2", "acceleration difference normalisation cap",
                      c.vanet.max_accel_diff_mps2));
  r.push_back(HW_REAL("vanet.max_distance_m", "m", "distance normalisation cap", c.vanet.max_distance_m));
  r.push_back(HW_REAL("vanet.recluster_period_s", "s", "VANET re-clustering period", c.vanet.recluster_period_s));

  r.push_back(HW_REAL("radio.bitrate_bps", "bit/s", "sensor radio bitrate", c.radio.bitrate_bps));
  r.push_back(HW_REAL("radio.sensor_packet_bits", "bit", "one sensor's per-period report",
                      c.radio.sensor_packet_bits));
  r.push_back(HW_REAL("radio.adv_packet_bits", "bit", "ADV/ADM message size", c.radio.adv_packet_bits));
  r.push_back(HW_REAL("radio.task_packet_bits", "bit", "AQI result message size", c.radio.task_packet_bits));
  r.push_back(HW_REAL("radio.per_hop_latency_s", "s", "processing/MAC allowance per hop",
                      c.radio.per_hop_latency_s));
  r.push_back(HW_REAL("radio.rsu_range_m", "m", "vehicle-to-RSU contact range", c.radio.rsu_range_m));
  r.push_back(HW_REAL("radio.v2v_bitrate_bps", "bit/s", "vehicle radio bitrate", c.radio.v2v_bitrate_bps));

  r.push_back(HW_REAL("traffic.arrival_rate_veh_per_s_per_lane", "1/s", "Poisson arrival rate per lane",
                      c.vehicles.arrival_rate_veh_per_s_per_lane));
  r.push_back(HW_REAL("traffic.speed_mean_mps", "m/s", "mean desired speed", c.vehicles.speed_mean_mps));
  r.push_back(HW_REAL("traffic.speed_sd_mps", "m/s", "desired speed spread", c.vehicles.speed_sd_mps));
  r.push_back(HW_REAL("traffic.max_accel_mps2", "m/s2", "acceleration bound", c.vehicles.max_accel_mps2));
  r.push_back(HW_REAL("traffic.accel_noise_mps2", "m/s2", "random acceleration amplitude",
                      c.vehicles.accel_noise_mps2));
  r.push_back(HW_REAL("traffic.speed_relaxation_per_s", "1/s", "pull towards desired speed",
                      c.vehicles.speed_relaxation_per_s));
  r.push_back(HW_REAL("traffic.registered_fraction", "-", "share of vehicles registered with the application",
                      c.vehicles.registered_fraction));
  r.push_back(HW_REAL("traffic.cm_cpu_rate_cycles_per_s", "cycles/s", "vehicle compute capacity",
                      c.vehicles.cm_cpu_rate_cycles_per_s));
  r.push_back(HW_REAL("traffic.cm_capacity_threshold", "-", "cluster load fraction below which fa = 1",
                      c.vehicles.cm_capacity_threshold));
  r.push_back(HW_REAL("traffic.mec_cpu_rate_cycles_per_s", "cycles/s", "RSU MEC compute capacity",
                      c.vehicles.mec_cpu_rate_cycles_per_s));

  r.push_back(HW_REAL("offload.aqi_cycles_per_reading", "cycles", "AQI task cost per sensor report",
                      c.offload.aqi_cycles_per_reading));
  r.push_back(HW_REAL("offload.aqi_base_cycles", "cycles", "fixed AQI task cost", c.offload.aqi_base_cycles));
  r.push_back(HW_INT("offload.local_keep", "tasks", "tasks a source keeps for local execution",
                     c.offload.local_keep));
  r.push_back(HW_INT("offload.cm_queue_capacity", "tasks", "per-vehicle task queue bound",
                     c.offload.cm_queue_capacity));
  r.push_back(HW_REAL("offload.capacity_horizon_s", "s", "work window defining a member's capacity for fa",
                      c.offload.capacity_horizon_s));
  r.push_back(HW_REAL("offload.adm_backoff_max_s", "s", "upper bound of the random ADM reply delay",
                      c.offload.adm_backoff_max_s));
  return r;
}

#undef HW_REAL
#undef HW_INT

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> r = build_registry();
  return r;
}

}  // namespace

const std::vector<ConfigKeyDoc>& config_keys() {
  static const std::vector<ConfigKeyDoc> docs = [] {
    std::vector<ConfigKeyDoc> d;
    for (const auto& e : registry()) d.push_back(e.doc);
    return d;
  }();
  return docs;
}

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& e : registry()) {
    if (e.doc.key == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw Error(ErrorCode::Parse, "unknown configuration key '" + std::string(key) + "'");
}

std::string get_config_value(const ScenarioConfig& cfg, std::string_view key) {
  for (const auto& e : registry())
    if (e.doc.key == key) return e.get(cfg);
  throw Error(ErrorCode::Parse, "unknown configuration key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    // Strip comments that are not inside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::Parse, where() + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::Parse, where() + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw Error(ErrorCode::Parse, where() + "empty key or value");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    try {
      set_config_value(cfg, full, value);
    } catch (const Error& e) {
      throw Error(e.code(), where() + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& e : registry()) {
    const auto dot = e.doc.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : e.doc.key.substr(0, dot);
    const std::string name = dot == std::string::npos ? e.doc.key : e.doc.key.substr(dot + 1);
    if (sec != section) {
      os << "\n[" << sec << "]\n";
      section = sec;
    }
    os << name << " = " << e.get(cfg) << "  # " << e.doc.unit << ", " << e.doc.description << "\n";
  }
  return os.str();
}

}  // namespace hwmon
