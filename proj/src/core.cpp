#include "hwmon/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>

namespace hwmon {

namespace {
std::atomic<std::uint64_t> g_warnings{0};
std::atomic<bool> g_warn_stderr{false};
std::mutex g_warn_mutex;
}  // namespace

void log_warning(std::string_view message) {
  g_warnings.fetch_add(1, std::memory_order_relaxed);
  if (!g_warn_stderr.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

std::uint64_t warning_count() noexcept { return g_warnings.load(); }
void set_warnings_to_stderr(bool enabled) noexcept { g_warn_stderr.store(enabled); }

double distance(Position a, Position b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::optional<double> angle_at(Position p, Position toward_a, Position toward_b) noexcept {
  const double ax = toward_a.x - p.x, ay = toward_a.y - p.y;
  const double bx = toward_b.x - p.x, by = toward_b.y - p.y;
  if ((ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0)) return std::nullopt;
  // atan2 of cross/dot is well conditioned near 0 and 180 degrees.
  const double cross = ax * by - ay * bx;
  const double dot = ax * bx + ay * by;
  return std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
}

namespace {

class IssueSink {
 public:
  void positive(const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) add(field, "must be a finite value > 0");
  }
  void range(const char* field, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << "must lie in [" << lo << ", " << hi << "], got " << v;
      add(field, os.str());
    }
  }
  void add(std::string field, std::string message) {
    issues.push_back({std::move(field), std::move(message)});
  }
  std::vector<ConfigIssue> issues;
};

bool near(double a, double b) { return std::abs(a - b) <= 1e-9; }

}  // namespace

std::vector<ConfigIssue> validate(const ScenarioConfig& c) {
  IssueSink s;
  s.positive("road_length_km", c.road_length_km);
  s.range("rsu_spacing_km", c.rsu_spacing_km, 1.0, 10.0);
  s.range("vbp_spacing_m", c.vbp_spacing_m, 250.0, 2500.0);
  if (c.vbp_spacing_m > c.rsu_spacing_km * 1000.0) {
    std::ostringstream os;
    os << "vbp_spacing_m (" << c.vbp_spacing_m << ") exceeds rsu_spacing_km*1000 ("
       << c.rsu_spacing_km * 1000.0 << "): no virtual base point fits between RSUs";
    s.add("vbp_spacing_m,rsu_spacing_km", os.str());
  }
  if (c.rsu_spacing_km > c.road_length_km) s.add("rsu_spacing_km", "exceeds road_length_km");
  if (c.sensors_per_subarea < 0) s.add("sensors_per_subarea", "must be >= 0 (0 derives it from density)");
  if (c.sensors_per_subarea == 0) {
    s.positive("density_factor", c.density_factor);
    s.positive("base_density_per_km2", c.base_density_per_km2);
  }
  s.positive("subarea_depth_m", c.subarea_depth_m);
  if (c.lanes_per_direction < 1) s.add("lanes_per_direction", "must be >= 1");
  s.positive("lane_width_m", c.lane_width_m);
  s.positive("sensor_range_m", c.sensor_range_m);
  if (c.sensor_range_m != c.clustering.range_m)
    s.add("sensor_range_m,wsn.range_m", "sensor radio range and clustering range must agree");
  s.positive("sensing_period_s", c.sensing_period_s);
  s.positive("adv_period_s", c.adv_period_s);
  s.positive("fa_update_period_s", c.fa_update_period_s);
  s.positive("mobility_dt_s", c.mobility_dt_s);
  if (c.reformation_factor < 1) s.add("reformation_factor", "must be >= 1");
  s.positive("duration_s", c.duration_s);
  if (!(c.drain_s >= 0.0)) s.add("drain_s", "must be >= 0");

  const auto& w = c.clustering;
  if (!(w.forwarding_angle_deg > 0.0 && w.forwarding_angle_deg < 180.0))
    s.add("wsn.forwarding_angle_deg", "must lie in (0, 180)");
  s.positive("wsn.range_m", w.range_m);
  s.positive("wsn.initial_energy_j", w.initial_energy_j);

  const auto& v = c.vanet;
  for (auto [name, val] : {std::pair{"vanet.c1", v.c1}, {"vanet.c2", v.c2}, {"vanet.alpha", v.alpha},
                           {"vanet.beta", v.beta}, {"vanet.gamma", v.gamma}, {"vanet.delta", v.delta}}) {
    if (!(val >= 0.0)) s.add(name, "must be >= 0");
  }
  if (!near(v.c1 + v.c2, 1.0)) s.add("vanet.c1,vanet.c2", "c1 + c2 must equal 1");
  if (!near(v.alpha + v.beta + v.gamma + v.delta, 1.0))
    s.add("vanet.alpha,vanet.beta,vanet.gamma,vanet.delta", "alpha + beta + gamma + delta must equal 1");
  s.positive("vanet.md_threshold", v.md_threshold);
  s.positive("vanet.v2v_range_m", v.v2v_range_m);
  s.positive("vanet.max_speed_diff_mps", v.max_speed_diff_mps);
  s.positive("vanet.max_accel_diff_mps2", v.max_accel_diff_mps2);
  s.positive("vanet.max_distance_m", v.max_distance_m);
  s.positive("vanet.recluster_period_s", v.recluster_period_s);

  const auto& r = c.radio;
  s.positive("radio.bitrate_bps", r.bitrate_bps);
  s.positive("radio.sensor_packet_bits", r.sensor_packet_bits);
  s.positive("radio.adv_packet_bits", r.adv_packet_bits);
  s.positive("radio.task_packet_bits", r.task_packet_bits);
  s.positive("radio.per_hop_latency_s", r.per_hop_latency_s);
  s.positive("radio.rsu_range_m", r.rsu_range_m);
  s.positive("radio.v2v_bitrate_bps", r.v2v_bitrate_bps);

  const auto& t = c.vehicles;
  s.positive("traffic.arrival_rate_veh_per_s_per_lane", t.arrival_rate_veh_per_s_per_lane);
  s.positive("traffic.speed_mean_mps", t.speed_mean_mps);
  s.positive("traffic.speed_sd_mps", t.speed_sd_mps);
  s.positive("traffic.max_accel_mps2", t.max_accel_mps2);
  if (!(t.accel_noise_mps2 >= 0.0)) s.add("traffic.accel_noise_mps2", "must be >= 0");
  if (!(t.speed_relaxation_per_s >= 0.0)) s.add("traffic.speed_relaxation_per_s", "must be >= 0");
  s.range("traffic.registered_fraction", t.registered_fraction, 0.0, 1.0);
  s.positive("traffic.cm_cpu_rate_cycles_per_s", t.cm_cpu_rate_cycles_per_s);
  if (!(t.cm_capacity_threshold > 0.0 && t.cm_capacity_threshold <= 1.0))
    s.add("traffic.cm_capacity_threshold", "must lie in (0, 1]");
  s.positive("traffic.mec_cpu_rate_cycles_per_s", t.mec_cpu_rate_cycles_per_s);

  const auto& o = c.offload;
  s.positive("offload.aqi_cycles_per_reading", o.aqi_cycles_per_reading);
  if (!(o.aqi_base_cycles >= 0.0)) s.add("offload.aqi_base_cycles", "must be >= 0");
  if (o.local_keep < 0) s.add("offload.local_keep", "must be >= 0");
  if (o.cm_queue_capacity < 1) s.add("offload.cm_queue_capacity", "must be >= 1");
  s.positive("offload.capacity_horizon_s", o.capacity_horizon_s);
  if (!(o.adm_backoff_max_s >= 0.0)) s.add("offload.adm_backoff_max_s", "must be >= 0");

  if (c.sensors_per_subarea >= 0 && s.issues.empty() && effective_sensors_per_subarea(c) < 1)
    s.add("sensors_per_subarea", "derived sensor count is zero");
  return s.issues;
}

void require_valid(const ScenarioConfig& cfg) {
  const auto issues = validate(cfg);
  if (issues.empty()) return;
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& i : issues) os << "\n  " << i.field << ": " << i.message;
  throw Error(ErrorCode::InvalidConfig, os.str());
}

int effective_sensors_per_subarea(const ScenarioConfig& cfg) {
  if (cfg.sensors_per_subarea > 0) return cfg.sensors_per_subarea;
  const double area_km2 = cfg.vbp_spacing_m * cfg.subarea_depth_m / 1.0e6;
  return static_cast<int>(std::lround(cfg.density_factor * area_km2 * cfg.base_density_per_km2));
}

double road_half_width_m(const ScenarioConfig& cfg) noexcept {
  return cfg.lanes_per_direction * cfg.lane_width_m;
}

}  // namespace hwmon
