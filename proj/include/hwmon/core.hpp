// Shared domain types, scenario configuration and geometry helpers.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hwmon {

enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidConfig = 2,
  Io = 3,
  Parse = 4,
  OutOfRange = 5,
  Corrupt = 6,
  Audit = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using NodeId = std::uint32_t;
using VehicleId = std::uint32_t;

enum class Role { Member, ClusterHead };

/// Point in the road frame: x runs along the road axis, y is the signed lateral
/// offset from the road centre line (negative = south side, positive = north side).
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b) noexcept;

/// Angle in degrees, in [0, 180], between the rays p->toward_a and p->toward_b.
/// Empty when either target coincides with p.
std::optional<double> angle_at(Position p, Position toward_a, Position toward_b) noexcept;

/// Non-fatal diagnostics. Counted always, printed to stderr only when enabled.
void log_warning(std::string_view message);
std::uint64_t warning_count() noexcept;
void set_warnings_to_stderr(bool enabled) noexcept;

enum class TxPowerModel { Linear, Quadratic };

struct WsnParams {
  double forwarding_angle_deg = 60.0;
  double range_m = 45.0;
  double initial_energy_j = 500.0;
  TxPowerModel tx_model = TxPowerModel::Linear;
};

struct VanetParams {
  double c1 = 0.5;
  double c2 = 0.5;
  double alpha = 0.25;
  double beta = 0.25;
  double gamma = 0.25;
  double delta = 0.25;
  double md_threshold = 0.3;
  double v2v_range_m = 300.0;
  double max_speed_diff_mps = 10.0;
  double max_accel_diff_mps2 = 3.0;
  double max_distance_m = 300.0;
  double recluster_period_s = 5.0;
};

struct RadioParams {
  double bitrate_bps = 250000.0;
  // One sensor's per-period report (six pollutant channels, fragmented into
  // 802.15.4 frames on the air).
  double sensor_packet_bits = 4096.0;
  double adv_packet_bits = 256.0;
  double task_packet_bits = 1024.0;
  double per_hop_latency_s = 0.005;
  double rsu_range_m = 500.0;
  double v2v_bitrate_bps = 6.0e6;
};

struct TrafficParams {
  double arrival_rate_veh_per_s_per_lane = 0.3;
  double speed_mean_mps = 30.0;
  double speed_sd_mps = 3.0;
  double max_accel_mps2 = 1.5;
  double accel_noise_mps2 = 0.3;
  double speed_relaxation_per_s = 0.1;
  double registered_fraction = 1.0;
  double cm_cpu_rate_cycles_per_s = 1.0e9;
  double cm_capacity_threshold = 0.8;
  double mec_cpu_rate_cycles_per_s = 2.0e10;
};

struct OffloadParams {
  double aqi_cycles_per_reading = 1.0e6;
  double aqi_base_cycles = 1.0e7;
  int local_keep = 1;
  int cm_queue_capacity = 4;
  double capacity_horizon_s = 60.0;  // member capacity = cpu rate x horizon
  double adm_backoff_max_s = 0.005;  // random ADM reply delay upper bound
};

struct ScenarioConfig {
  double road_length_km = 100.0;
  double rsu_spacing_km = 5.0;
  double vbp_spacing_m = 500.0;
  // 0 means "derive from density_factor".
  int sensors_per_subarea = 400;
  double density_factor = 1.0;
  double base_density_per_km2 = 800.0;
  double subarea_depth_m = 1000.0;
  int lanes_per_direction = 3;
  double lane_width_m = 3.5;
  double sensor_range_m = 45.0;
  double sensing_period_s = 600.0;
  double adv_period_s = 1.0;
  double fa_update_period_s = 2.0;
  double mobility_dt_s = 0.5;
  int reformation_factor = 10;
  double duration_s = 1200.0;
  double drain_s = 3600.0;
  std::uint64_t seed = 1;
  WsnParams clustering;
  VanetParams vanet;
  RadioParams radio;
  TrafficParams vehicles;
  OffloadParams offload;
};

struct ConfigIssue {
  std::string field;
  std::string message;
};

/// Every violated constraint, empty when the configuration is usable.
std::vector<ConfigIssue> validate(const ScenarioConfig& cfg);

/// Throws Error(InvalidConfig) listing every issue.
void require_valid(const ScenarioConfig& cfg);

/// Z: explicit value, or the density-derived count when sensors_per_subarea == 0.
int effective_sensors_per_subarea(const ScenarioConfig& cfg);

double road_half_width_m(const ScenarioConfig& cfg) noexcept;

// --- configuration file I/O (config.cpp) ---

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);
/// Rendered as it would appear in a config file (strings quoted).
std::string get_config_value(const ScenarioConfig& cfg, std::string_view key);
std::string config_to_text(const ScenarioConfig& cfg);

struct ConfigKeyDoc {
  std::string key;
  std::string unit;
  std::string description;
};
const std::vector<ConfigKeyDoc>& config_keys();

}  // namespace hwmon
