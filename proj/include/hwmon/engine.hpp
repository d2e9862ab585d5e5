// Scenario construction, highway mobility and the discrete-event run loop.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hwmon/core.hpp"
#include "hwmon/energy.hpp"
#include "hwmon/offload.hpp"
#include "hwmon/rng.hpp"
#include "hwmon/vanet.hpp"
#include "hwmon/wsn.hpp"

namespace hwmon {

enum class Mode { Combined, WsnOnly };

std::string_view mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view s);

struct Subarea {
  int index = 0;
  int vbp = 0;
  int side = 1;  // +1 north of the road, -1 south
  double x_lo = 0.0, x_hi = 0.0;
  double lateral_lo = 0.0, lateral_hi = 0.0;  // distance from the road axis
  NodeId first_sensor = 0;
  int sensor_count = 0;

  bool contains(Position p) const {
    const double lat = side * p.y;
    return p.x >= x_lo && p.x < x_hi && lat >= lateral_lo && lat < lateral_hi;
  }
};

struct LaneSpawn {
  Direction direction = Direction::Eastbound;
  int lane = 0;
  double next_time_s = 0.0;
};

struct World {
  ScenarioConfig config;
  std::vector<Position> rsus;
  std::vector<VirtualBasePoint> vbps;
  std::vector<Subarea> subareas;
  std::vector<SensorNode> sensors;  // sensors[i].id == i
  std::vector<Vehicle> vehicles;    // vehicles on the road, by ascending id
  std::vector<LaneSpawn> spawns;
  VehicleId next_vehicle_id = 0;
  Rng traffic;
  double clock_s = 0.0;
};

/// Deterministic world for cfg.seed. Throws Error(InvalidConfig) on an invalid config.
World build_scenario(const ScenarioConfig& cfg);
World build_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

/// Stable text rendering of the static world (config, RSUs, VBPs, sub-areas, sensors, initial vehicles).
std::string world_dump(const World& w);

/// Lateral centre line of a lane.
double lane_y(const ScenarioConfig& cfg, Direction d, int lane);

/// Nearest RSU index; equal distances resolve to the lower x.
int nearest_rsu(const World& w, Position p);

/// Advances every vehicle by dt, retires those leaving the road and spawns
/// arrivals. Retired vehicles are returned (with their final position).
std::vector<Vehicle> mobility_tick(World& w, double dt);

enum class EventKind : int {
  SenseTick,
  WsnHop,
  RnTick,
  AdvTick,
  AdmArrive,
  Contact,
  TaskDone,
  FaTick,
  MobilityTick,
  ReclusterTick,
  Delivery,
  RelayArrive,
  TaskArrive,
  ResultArrive,
  MecDone,
};

enum class LogEvent : int {
  Sense,
  GatherDone,
  DirectToRsu,
  Relay,
  Adv,
  Adm,
  Assign,
  Handoff,
  TaskCreate,
  Dispatch,
  ExecLocal,
  ExecRemote,
  TaskDone,
  ResultToSource,
  Hold,
  Deliver,
  MecDone,
  AqiAtRsu,
  Retire,
  FaChange,
  Recluster,
  Reform,
};

std::string_view log_event_name(LogEvent e);

enum class ActorKind : char { Sim = 'S', Sensor = 'N', Rendezvous = 'R', Vehicle = 'V', Rsu = 'U' };

struct LogRow {
  double time_s = 0.0;
  ActorKind actor = ActorKind::Sim;
  std::int64_t actor_id = 0;
  LogEvent event = LogEvent::Sense;
  std::optional<TaskId> task;
  int period = -1;
  std::int64_t detail = -1;  // sub-area, peer id or count, depending on the event
};

struct PeriodMetrics {
  int period = 0;
  double start_s = 0.0;
  bool complete = false;
  double completion_time_s = 0.0;
  int subareas_total = 0;
  int subareas_delivered = 0;
};

struct RunCounters {
  std::uint64_t tasks_created = 0;
  std::uint64_t tasks_remote = 0;
  std::uint64_t tasks_local = 0;
  std::uint64_t tasks_raw_to_rsu = 0;
  std::uint64_t tasks_delivered = 0;
  std::uint64_t tasks_invalid = 0;
  std::uint64_t batches = 0;
  std::uint64_t batches_direct = 0;
  std::uint64_t batches_relayed = 0;
  std::uint64_t handoffs = 0;
  std::uint64_t adv_messages = 0;
  std::uint64_t adm_messages = 0;
  std::uint64_t results_to_source = 0;
  std::uint64_t results_held = 0;
  std::uint64_t vehicles_spawned = 0;
  std::uint64_t vehicles_retired = 0;
  std::uint64_t ch_changes = 0;
  double ch_changes_per_min = 0.0;
  double energy_tx_j = 0.0;
  double energy_rx_j = 0.0;
  double energy_sleep_j = 0.0;
  double network_lifetime_s = 0.0;  // +inf when no sensor died
  double alive_fraction_end = 1.0;
  std::uint64_t dead_debit_attempts = 0;
  std::uint64_t events_processed = 0;
  double end_time_s = 0.0;
};

struct AuditReport {
  bool tasks_ok = true;
  bool batches_ok = true;
  bool energy_ok = true;
  bool structure_ok = true;
  std::vector<std::string> problems;

  bool ok() const { return tasks_ok && batches_ok && energy_ok && structure_ok; }
};

struct RunOptions {
  bool record_log = true;
};

struct RunResult {
  Mode mode = Mode::Combined;
  std::uint64_t seed = 0;
  std::vector<PeriodMetrics> periods;
  RunCounters counters;
  AuditReport audit;
  std::vector<LogRow> log;
  EnergyLedger ledger;

  /// Mean completion time over complete periods; empty when none completed.
  std::optional<double> mean_completion_s() const;
  int incomplete_periods() const;
};

/// Sensing ticks at k * sensing_period < duration_s; runs until every period
/// is delivered or duration_s + drain_s elapses. The world is copied, so one
/// world can feed several runs.
RunResult run(const World& world, double duration_s, Mode mode, const RunOptions& options = {});

/// Sensing start to the last sub-area result reaching an RSU, recovered from
/// the event log. Empty when fewer than `subareas` results were logged.
std::optional<double> completion_time(std::span<const LogRow> log, int period, int subareas);

}  // namespace hwmon
