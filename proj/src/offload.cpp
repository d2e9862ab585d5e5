#include "hwmon/offload.hpp"

#include <algorithm>

namespace hwmon {

std::string_view task_state_name(TaskState s) {
  switch (s) {
    case TaskState::Created: return "Created";
    case TaskState::Dispatched: return "Dispatched";
    case TaskState::ExecutingLocal: return "ExecutingLocal";
    case TaskState::ExecutingRemote: return "ExecutingRemote";
    case TaskState::Completed: return "Completed";
    case TaskState::DeliveredToRsu: return "DeliveredToRsu";
  }
  return "?";
}

bool task_transition_allowed(TaskState from, TaskState to) {
  using S = TaskState;
  switch (from) {
    case S::Created: return to == S::Dispatched || to == S::ExecutingLocal || to == S::DeliveredToRsu;
    case S::Dispatched: return to == S::ExecutingRemote;
    case S::ExecutingLocal:
    case S::ExecutingRemote: return to == S::Completed;
    case S::Completed: return to == S::DeliveredToRsu;
    case S::DeliveredToRsu: return false;
  }
  return false;
}

void Task::transition(TaskState to) {
  if (!task_transition_allowed(state, to))
    throw Error(ErrorCode::Corrupt, "task " + std::to_string(id) + ": illegal transition " +
                                        std::string(task_state_name(state)) + " -> " + std::string(task_state_name(to)));
  state = to;
}

int MeasurementBatch::sensor_count() const {
  int n = 0;
  for (const auto& s : samples) n += s.sensor_count;
  return n;
}

RnAction rn_tick(const SensorNode& rn, const MeasurementBatch& batch, std::span<const Position> rsus, double range_m) {
  if (batch.samples.empty()) return RnAction::None;
  for (const auto& r : rsus)
    if (distance(rn.pos, r) <= range_m) return RnAction::DirectToRsu;
  return RnAction::Broadcast;
}

std::optional<AdmMsg> vehicle_on_adv(const Vehicle& v, const AdvMsg& adv) {
  if (!v.registered || !v.fa) return std::nullopt;
  return AdmMsg{v.id, adv.rn_id, adv.period_index, 0.0};
}

std::vector<Assignment> rn_assign(std::span<const AdmMsg> adm_queue, std::deque<MeasurementBatch>& pending) {
  std::vector<Assignment> out;
  std::set<VehicleId> seen;
  for (const auto& adm : adm_queue) {
    if (pending.empty()) break;
    if (!seen.insert(adm.vehicle_id).second) continue;
    out.push_back({adm.vehicle_id, std::move(pending.front())});
    pending.pop_front();
  }
  return out;
}

AppProfile aqi_profile(const ScenarioConfig& cfg) {
  AppProfile p;
  p.cycles_per_reading = cfg.offload.aqi_cycles_per_reading;
  p.base_cycles = cfg.offload.aqi_base_cycles;
  p.bits_per_reading = cfg.radio.sensor_packet_bits;
  return p;
}

std::vector<Task> decompose_tasks(const MeasurementBatch& batch, const AppProfile& profile, TaskId& next_id,
                                  std::optional<VehicleId> source) {
  if (batch.samples.empty()) throw Error(ErrorCode::InvalidArgument, "cannot decompose an empty batch");
  std::vector<Task> tasks;
  for (const auto& s : batch.samples) {
    Task t;
    t.id = next_id++;
    t.source_vehicle = source;
    t.subarea = s.subarea;
    t.period_index = batch.period_index;
    t.input_bits = s.sensor_count * profile.bits_per_reading;
    t.compute_cycles = profile.base_cycles + s.sensor_count * profile.cycles_per_reading;
    t.deadline_s = profile.deadline_s;
    t.readings = s.readings;
    t.invalid = !aqi_inputs_valid(s.readings);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

DispatchPlan dispatch_tasks(VehicleId source, std::span<const CmCandidate> members, std::span<const TaskId> tasks,
                            int local_capacity) {
  DispatchPlan plan;
  bool isolated = true;
  for (const auto& m : members)
    if (m.id != source) isolated = false;
  if (isolated) {
    plan.to_rsu.assign(tasks.begin(), tasks.end());
    return plan;
  }
  std::size_t next = 0;
  for (const auto& m : members) {
    if (next == tasks.size()) break;
    if (m.id == source || !m.willing()) continue;
    plan.remote.emplace_back(tasks[next++], m.id);
  }
  for (int k = 0; k < local_capacity && next < tasks.size(); ++k) plan.local.push_back(tasks[next++]);
  while (next < tasks.size()) plan.to_rsu.push_back(tasks[next++]);
  return plan;
}

ResultRoute cm_complete(const Task& task, bool source_in_cluster) {
  if (task.deadline_s || source_in_cluster) return ResultRoute::ResultToSource;
  return ResultRoute::HoldForRsu;
}

bool ch_update_fa(std::span<const MemberLoad> members, double threshold) {
  double load = 0.0, capacity = 0.0;
  for (const auto& m : members) {
    load += m.queued_cycles;
    capacity += m.capacity_cycles;
  }
  return load < threshold * capacity;
}

bool RsuDeliveryBook::deliver(TaskId task, int rsu, double time_s) {
  if (!first_.emplace(task, std::make_pair(rsu, time_s)).second) {
    ++duplicates_;
    return false;
  }
  return true;
}

std::vector<TaskId> source_at_rsu(std::vector<TaskId>& held, int rsu, double time_s, RsuDeliveryBook& book) {
  std::vector<TaskId> accepted;
  for (auto t : held)
    if (book.deliver(t, rsu, time_s)) accepted.push_back(t);
  held.clear();
  return accepted;
}

void execute_aqi(Task& task, const AqiBreakpointTable& table) {
  if (task.invalid) return;
  try {
    task.result = compute_aqi(std::span<const PollutantReading>(task.readings), table);
  } catch (const AqiValidityError&) {
    task.invalid = true;
  }
}

}  // namespace hwmon
