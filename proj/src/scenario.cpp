#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hwmon/engine.hpp"

namespace hwmon {

namespace {

double max_speed(const TrafficParams& t) { return t.speed_mean_mps + 3.0 * t.speed_sd_mps; }

Vehicle make_vehicle(World& w, Direction d, int lane, double x) {
  const auto& t = w.config.vehicles;
  Vehicle v;
  v.id = w.next_vehicle_id++;
  v.direction = d;
  v.lane = lane;
  v.pos = {x, lane_y(w.config, d, lane)};
  v.desired_speed_mps =
      std::clamp(w.traffic.normal(t.speed_mean_mps, t.speed_sd_mps), 0.5 * t.speed_mean_mps, max_speed(t));
  v.speed_mps = v.desired_speed_mps;
  v.registered = w.traffic.bernoulli(t.registered_fraction);
  return v;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string_view mode_name(Mode m) { return m == Mode::Combined ? "combined" : "wsn_only"; }

std::optional<Mode> mode_from_name(std::string_view s) {
  if (s == "combined") return Mode::Combined;
  if (s == "wsn_only" || s == "wsn-only" || s == "wsnonly") return Mode::WsnOnly;
  return std::nullopt;
}

double lane_y(const ScenarioConfig& cfg, Direction d, int lane) {
  // Right-hand traffic: eastbound lanes lie south of the axis.
  const double off = (lane + 0.5) * cfg.lane_width_m;
  return d == Direction::Eastbound ? -off : off;
}

int nearest_rsu(const World& w, Position p) {
  const int n = static_cast<int>(w.rsus.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "world has no RSU");
  const double spacing = w.config.rsu_spacing_km * 1000.0;
  const int k0 = std::clamp(static_cast<int>(std::floor(p.x / spacing)), 0, n - 1);
  const int k1 = std::min(k0 + 1, n - 1);
  return distance(p, w.rsus[k1]) < distance(p, w.rsus[k0]) ? k1 : k0;
}

World build_scenario(const ScenarioConfig& cfg) { return build_scenario(cfg, cfg.seed); }

World build_scenario(const ScenarioConfig& cfg_in, std::uint64_t seed) {
  require_valid(cfg_in);
  World w;
  w.config = cfg_in;
  w.config.seed = seed;
  const auto& cfg = w.config;
  const double road_m = cfg.road_length_km * 1000.0;
  const double spacing = cfg.rsu_spacing_km * 1000.0;
  const double half = road_half_width_m(cfg);
  const double y = cfg.vbp_spacing_m;

  const int n_rsu = static_cast<int>(std::floor(cfg.road_length_km / cfg.rsu_spacing_km + 1e-9)) + 1;
  for (int k = 0; k < n_rsu; ++k) w.rsus.push_back({k * spacing, 0.0});

  for (int k = 0; k + 1 < n_rsu; ++k)
    for (int m = 1; m * y < spacing - 1e-9; ++m) {
      VirtualBasePoint v;
      v.index = static_cast<int>(w.vbps.size());
      v.pos = {k * spacing + m * y, 0.0};
      v.x_lo = v.pos.x - y / 2.0;
      v.x_hi = v.pos.x + y / 2.0;
      w.vbps.push_back(v);
    }

  Rng deploy(seed, Stream::Deployment);
  const int z = effective_sensors_per_subarea(cfg);
  for (const auto& v : w.vbps)
    for (int side : {-1, 1}) {
      Subarea s;
      s.index = static_cast<int>(w.subareas.size());
      s.vbp = v.index;
      s.side = side;
      s.x_lo = v.x_lo;
      s.x_hi = v.x_hi;
      s.lateral_lo = half;
      s.lateral_hi = half + cfg.subarea_depth_m;
      s.first_sensor = static_cast<NodeId>(w.sensors.size());
      s.sensor_count = z;
      for (int i = 0; i < z; ++i) {
        SensorNode n;
        n.id = static_cast<NodeId>(w.sensors.size());
        const double px = s.x_lo + deploy.uniform() * (s.x_hi - s.x_lo);
        const double lat = half + deploy.uniform() * cfg.subarea_depth_m;
        n.pos = {px, side * lat};
        n.remaining_energy_j = cfg.clustering.initial_energy_j;
        n.subarea = s.index;
        w.sensors.push_back(n);
      }
      w.subareas.push_back(s);
    }

  w.traffic = Rng(seed, Stream::Traffic);
  const auto& t = cfg.vehicles;
  const double per_metre = t.arrival_rate_veh_per_s_per_lane / t.speed_mean_mps;
  for (auto d : {Direction::Eastbound, Direction::Westbound})
    for (int lane = 0; lane < cfg.lanes_per_direction; ++lane) {
      // Equilibrium headways, measured from the entry end.
      for (double s = w.traffic.exponential(per_metre); s < road_m; s += w.traffic.exponential(per_metre))
        w.vehicles.push_back(make_vehicle(w, d, lane, d == Direction::Eastbound ? s : road_m - s));
      w.spawns.push_back({d, lane, w.traffic.exponential(t.arrival_rate_veh_per_s_per_lane)});
    }
  return w;
}

std::vector<Vehicle> mobility_tick(World& w, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "mobility step must be positive");
  const auto& t = w.config.vehicles;
  const double road_m = w.config.road_length_km * 1000.0;
  std::vector<Vehicle> retired;
  std::vector<Vehicle> kept;
  kept.reserve(w.vehicles.size() + 8);
  for (auto& v : w.vehicles) {
    double a = t.speed_relaxation_per_s * (v.desired_speed_mps - v.speed_mps);
    if (t.accel_noise_mps2 > 0.0) a += w.traffic.normal(0.0, t.accel_noise_mps2);
    a = std::clamp(a, -t.max_accel_mps2, t.max_accel_mps2);
    v.accel_mps2 = a;
    if (a != 0.0) v.speed_mps = std::clamp(v.speed_mps + a * dt, 0.0, std::max(max_speed(t), v.desired_speed_mps));
    v.pos.x += (v.direction == Direction::Eastbound ? 1.0 : -1.0) * v.speed_mps * dt;
    if (v.pos.x > road_m || v.pos.x < 0.0)
      retired.push_back(std::move(v));
    else
      kept.push_back(std::move(v));
  }
  w.vehicles = std::move(kept);
  const double end = w.clock_s + dt;
  for (auto& s : w.spawns)
    while (s.next_time_s <= end) {
      auto v = make_vehicle(w, s.direction, s.lane, 0.0);
      const double run = v.speed_mps * (end - s.next_time_s);
      v.pos.x = s.direction == Direction::Eastbound ? run : road_m - run;
      w.vehicles.push_back(std::move(v));
      s.next_time_s += w.traffic.exponential(t.arrival_rate_veh_per_s_per_lane);
    }
  w.clock_s = end;
  return retired;
}

std::string world_dump(const World& w) {
  std::ostringstream os;
  os << "# world seed " << w.config.seed << "\n[config]\n" << config_to_text(w.config);
  os << "[rsus] " << w.rsus.size() << '\n';
  for (std::size_t k = 0; k < w.rsus.size(); ++k) os << k << ' ' << fmt(w.rsus[k].x) << ' ' << fmt(w.rsus[k].y) << '\n';
  os << "[vbps] " << w.vbps.size() << '\n';
  for (const auto& v : w.vbps) os << v.index << ' ' << fmt(v.pos.x) << ' ' << fmt(v.x_lo) << ' ' << fmt(v.x_hi) << '\n';
  os << "[subareas] " << w.subareas.size() << '\n';
  for (const auto& s : w.subareas)
    os << s.index << ' ' << s.vbp << ' ' << s.side << ' ' << fmt(s.x_lo) << ' ' << fmt(s.x_hi) << ' '
       << fmt(s.lateral_lo) << ' ' << fmt(s.lateral_hi) << ' ' << s.first_sensor << ' ' << s.sensor_count << '\n';
  os << "[sensors] " << w.sensors.size() << '\n';
  for (const auto& n : w.sensors)
    os << n.id << ' ' << fmt(n.pos.x) << ' ' << fmt(n.pos.y) << ' ' << n.subarea << ' ' << fmt(n.remaining_energy_j)
       << '\n';
  os << "[vehicles] " << w.vehicles.size() << '\n';
  for (const auto& v : w.vehicles)
    os << v.id << ' ' << (v.direction == Direction::Eastbound ? 'E' : 'W') << ' ' << v.lane << ' ' << fmt(v.pos.x)
       << ' ' << fmt(v.speed_mps) << ' ' << (v.registered ? 1 : 0) << '\n';
  return os.str();
}

std::string_view log_event_name(LogEvent e) {
  static constexpr std::array<std::string_view, 22> names = {
      "SENSE",     "GATHER_DONE", "DIRECT_TO_RSU", "RELAY",     "ADV",        "ADM",
      "ASSIGN",    "HANDOFF",     "TASK_CREATE",   "DISPATCH",  "EXEC_LOCAL", "EXEC_REMOTE",
      "TASK_DONE", "RESULT_TO_SOURCE", "HOLD",     "DELIVER",   "MEC_DONE",   "AQI_AT_RSU",
      "RETIRE",    "FA_CHANGE",   "RECLUSTER",     "REFORM"};
  return names.at(static_cast<std::size_t>(e));
}

std::optional<double> RunResult::mean_completion_s() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& p : periods)
    if (p.complete) {
      sum += p.completion_time_s;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / n;
}

int RunResult::incomplete_periods() const {
  return static_cast<int>(std::count_if(periods.begin(), periods.end(), [](const auto& p) { return !p.complete; }));
}

std::optional<double> completion_time(std::span<const LogRow> log, int period, int subareas) {
  std::optional<double> start;
  double last = 0.0;
  int delivered = 0;
  for (const auto& r : log) {
    if (r.period != period) continue;
    if (r.event == LogEvent::Sense) start = r.time_s;
    if (r.event == LogEvent::AqiAtRsu) {
      ++delivered;
      last = std::max(last, r.time_s);
    }
  }
  if (!start || delivered < subareas) return std::nullopt;
  return last - *start;
}

}  // namespace hwmon
