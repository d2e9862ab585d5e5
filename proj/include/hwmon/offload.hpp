// Vehicle-assisted offloading: RN advertisement and FCFS hand-off, task
// decomposition and dispatch inside a vehicle cluster, result routing and
// RSU delivery.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "hwmon/aqi.hpp"
#include "hwmon/core.hpp"
#include "hwmon/vanet.hpp"
#include "hwmon/wsn.hpp"

namespace hwmon {

using TaskId = std::uint64_t;

enum class TaskState { Created, Dispatched, ExecutingLocal, ExecutingRemote, Completed, DeliveredToRsu };

std::string_view task_state_name(TaskState s);

/// Created -> Dispatched -> ExecutingRemote -> Completed -> DeliveredToRsu
/// Created -> ExecutingLocal -> Completed -> DeliveredToRsu
/// Created -> DeliveredToRsu (raw task, executed by the RSU MEC on arrival)
bool task_transition_allowed(TaskState from, TaskState to);

/// Readings of one sub-area for one period, already reduced to a per-pollutant mean.
struct SubareaSample {
  int subarea = 0;
  int sensor_count = 0;
  std::vector<PollutantReading> readings;
};

struct MeasurementBatch {
  int period_index = 0;
  std::vector<SubareaSample> samples;

  int sensor_count() const;
};

struct Task {
  TaskId id = 0;
  std::optional<VehicleId> source_vehicle;
  int subarea = 0;
  int period_index = 0;
  double input_bits = 0.0;
  double compute_cycles = 0.0;
  std::optional<double> deadline_s;
  TaskState state = TaskState::Created;
  std::optional<VehicleId> assignee;
  std::optional<AqiResult> result;
  bool invalid = false;
  std::vector<PollutantReading> readings;

  /// Throws Error(Corrupt) on a transition outside the state machine.
  void transition(TaskState to);
};

struct AdvMsg {
  NodeId rn_id = 0;
  int period_index = 0;
  int batch_summary = 0;  // sensor reports waiting at the RN
};

struct AdmMsg {
  VehicleId vehicle_id = 0;
  NodeId rn_id = 0;
  int period_index = 0;
  double arrival_s = 0.0;
};

enum class RnAction { None, DirectToRsu, Broadcast };

/// Direct delivery when an RSU lies within `range_m` of the RN, otherwise advertise.
RnAction rn_tick(const SensorNode& rn, const MeasurementBatch& batch, std::span<const Position> rsus, double range_m);

/// Admittance reply: only registered vehicles whose last fa was 1 answer.
std::optional<AdmMsg> vehicle_on_adv(const Vehicle& v, const AdvMsg& adv);

struct Assignment {
  VehicleId vehicle = 0;
  MeasurementBatch batch;
};

/// FCFS over the arrival-ordered queue, one batch per distinct vehicle.
/// Assigned batches are removed from `pending`; the rest stay for the next round.
std::vector<Assignment> rn_assign(std::span<const AdmMsg> adm_queue, std::deque<MeasurementBatch>& pending);

struct AppProfile {
  double cycles_per_reading = 1.0e6;
  double base_cycles = 1.0e7;
  double bits_per_reading = 4096.0;
  std::optional<double> deadline_s;  // AQI work has none
};

AppProfile aqi_profile(const ScenarioConfig& cfg);

/// One task per sub-area sample. Samples failing the AQI input rule still
/// yield a task, flagged invalid.
std::vector<Task> decompose_tasks(const MeasurementBatch& batch, const AppProfile& profile, TaskId& next_id,
                                  std::optional<VehicleId> source);

struct CmCandidate {
  VehicleId id = 0;
  bool fa = true;
  std::size_t queue_len = 0;
  std::size_t queue_capacity = 1;

  bool willing() const { return fa && queue_len < queue_capacity; }
};

struct DispatchPlan {
  std::vector<std::pair<TaskId, VehicleId>> remote;
  std::vector<TaskId> local;
  std::vector<TaskId> to_rsu;
};

/// Willing members (in the given poll order) take one task each, the source
/// keeps up to `local_capacity`, the rest travel raw to the next RSU.
/// An isolated source (no members) sends everything to the RSU.
DispatchPlan dispatch_tasks(VehicleId source, std::span<const CmCandidate> members, std::span<const TaskId> tasks,
                            int local_capacity);

enum class ResultRoute { ResultToSource, HoldForRsu };

/// Deadline tasks always go back to the source.
ResultRoute cm_complete(const Task& task, bool source_in_cluster);

struct MemberLoad {
  double queued_cycles = 0.0;
  double capacity_cycles = 0.0;
};

/// fa = 1 iff total queued work < threshold x total capacity.
bool ch_update_fa(std::span<const MemberLoad> members, double threshold);

/// Tracks which payloads already reached an RSU MEC.
class RsuDeliveryBook {
 public:
  /// False when the task was delivered before (the second offer is dropped).
  bool deliver(TaskId task, int rsu, double time_s);
  bool delivered(TaskId task) const { return first_.count(task) != 0; }
  std::uint64_t duplicate_offers() const noexcept { return duplicates_; }
  std::size_t size() const noexcept { return first_.size(); }

 private:
  std::map<TaskId, std::pair<int, double>> first_;
  std::uint64_t duplicates_ = 0;
};

/// Hands every held payload to the RSU. Returns the ids accepted for the first time.
std::vector<TaskId> source_at_rsu(std::vector<TaskId>& held, int rsu, double time_s, RsuDeliveryBook& book);

/// Runs the AQI computation for a task and stores the result (or flags it invalid).
void execute_aqi(Task& task, const AqiBreakpointTable& table);

}  // namespace hwmon
