#include <doctest.h>

#include <deque>

#include "hwmon/offload.hpp"

using namespace hwmon;

namespace {

MeasurementBatch batch_of(int period, std::vector<int> subareas, int sensors = 10) {
  MeasurementBatch b;
  b.period_index = period;
  for (int s : subareas) {
    SubareaSample x;
    x.subarea = s;
    x.sensor_count = sensors;
    for (auto p : {Pollutant::PM25, Pollutant::PM10, Pollutant::CO, Pollutant::O3, Pollutant::NO2, Pollutant::SO2}) {
      PollutantReading r;
      r.pollutant = p;
      r.concentration = p == Pollutant::CO ? 1.0 : p == Pollutant::O3 ? 0.04 : 20.0;
      x.readings.push_back(r);
    }
    b.samples.push_back(std::move(x));
  }
  return b;
}

SensorNode rn_at(double x, double y) {
  SensorNode n;
  n.id = 9;
  n.pos = {x, y};
  return n;
}

}  // namespace

TEST_CASE("task state machine") {
  CHECK(task_transition_allowed(TaskState::Created, TaskState::Dispatched));
  CHECK(task_transition_allowed(TaskState::ExecutingRemote, TaskState::Completed));
  CHECK_FALSE(task_transition_allowed(TaskState::Completed, TaskState::Created));
  CHECK_FALSE(task_transition_allowed(TaskState::DeliveredToRsu, TaskState::DeliveredToRsu));
  Task t;
  t.transition(TaskState::Dispatched);
  t.transition(TaskState::ExecutingRemote);
  t.transition(TaskState::Completed);
  t.transition(TaskState::DeliveredToRsu);
  CHECK_THROWS_AS(t.transition(TaskState::Completed), Error);
}

TEST_CASE("RN decision") {
  const std::vector<Position> rsus{{0, 0}, {3000, 0}};
  CHECK(rn_tick(rn_at(10, 0), batch_of(0, {1}), rsus, 45) == RnAction::DirectToRsu);
  CHECK(rn_tick(rn_at(2000, 15), batch_of(0, {1}), rsus, 45) == RnAction::Broadcast);
  CHECK(rn_tick(rn_at(10, 0), MeasurementBatch{}, rsus, 45) == RnAction::None);
}

TEST_CASE("vehicle reply to an advertisement") {
  Vehicle v;
  v.id = 4;
  const AdvMsg adv{9, 2, 30};
  const auto adm = vehicle_on_adv(v, adv);
  REQUIRE(adm.has_value());
  CHECK(adm->vehicle_id == 4u);
  CHECK(adm->rn_id == 9u);
  v.fa = false;
  CHECK_FALSE(vehicle_on_adv(v, adv).has_value());
  v.fa = true;
  v.registered = false;
  CHECK_FALSE(vehicle_on_adv(v, adv).has_value());
}

TEST_CASE("first come first served assignment") {
  std::deque<MeasurementBatch> pending{batch_of(0, {1}), batch_of(0, {2})};
  const std::vector<AdmMsg> adms{{7, 9, 0, 0.01}, {7, 9, 0, 0.011}, {3, 9, 0, 0.012}, {5, 9, 0, 0.013}};
  const auto a = rn_assign(adms, pending);
  REQUIRE(a.size() == 2);
  CHECK(a[0].vehicle == 7u);
  CHECK(a[0].batch.samples[0].subarea == 1);
  CHECK(a[1].vehicle == 3u);
  CHECK(pending.empty());

  std::deque<MeasurementBatch> keep{batch_of(0, {1})};
  CHECK(rn_assign({}, keep).empty());
  CHECK(keep.size() == 1);
}

TEST_CASE("decomposition: one task per sub-area, no deadline") {
  TaskId next = 100;
  const auto one = decompose_tasks(batch_of(3, {5}), AppProfile{}, next, 42);
  CHECK(one.size() == 1);
  CHECK(one[0].id == 100u);
  CHECK_FALSE(one[0].deadline_s.has_value());
  CHECK(one[0].period_index == 3);
  CHECK(one[0].compute_cycles == AppProfile{}.base_cycles + 10 * AppProfile{}.cycles_per_reading);
  const auto three = decompose_tasks(batch_of(3, {5, 6, 7}), AppProfile{}, next, 42);
  CHECK(three.size() == 3);
  CHECK(three[2].id == 103u);
  CHECK_THROWS_AS(decompose_tasks(MeasurementBatch{}, AppProfile{}, next, 42), Error);
}

TEST_CASE("dispatch plans") {
  const std::vector<TaskId> tasks{1, 2, 3};
  const std::vector<CmCandidate> two{{10, true, 0, 4}, {11, true, 0, 4}};
  auto plan = dispatch_tasks(99, two, tasks, 1);
  CHECK(plan.remote.size() == 2);
  CHECK(plan.local == std::vector<TaskId>{3});
  CHECK(plan.to_rsu.empty());

  const std::vector<CmCandidate> none{{10, false, 0, 4}, {11, true, 4, 4}};
  plan = dispatch_tasks(99, none, tasks, 0);
  CHECK(plan.remote.empty());
  CHECK(plan.to_rsu == tasks);

  const std::vector<TaskId> single{8};
  plan = dispatch_tasks(99, two, single, 1);
  REQUIRE(plan.remote.size() == 1);
  CHECK(plan.remote[0] == std::pair<TaskId, VehicleId>{8, 10});

  // A source alone in its cluster hands everything to the RSU.
  const std::vector<CmCandidate> alone{{99, true, 0, 4}};
  plan = dispatch_tasks(99, alone, tasks, 1);
  CHECK(plan.to_rsu == tasks);
}

TEST_CASE("result routing") {
  Task t;
  CHECK(cm_complete(t, true) == ResultRoute::ResultToSource);
  CHECK(cm_complete(t, false) == ResultRoute::HoldForRsu);
  t.invalid = true;
  CHECK(cm_complete(t, false) == ResultRoute::HoldForRsu);
}

TEST_CASE("ability flag") {
  CHECK(ch_update_fa({}, 0.8) == false);
  const std::vector<MemberLoad> empty{{0, 100}, {0, 100}};
  CHECK(ch_update_fa(empty, 0.8));
  const std::vector<MemberLoad> full{{100, 100}, {100, 100}};
  CHECK_FALSE(ch_update_fa(full, 0.8));
  const std::vector<MemberLoad> at{{80, 100}, {80, 100}};
  CHECK_FALSE(ch_update_fa(at, 0.8));
}

TEST_CASE("RSU delivery is exactly once") {
  RsuDeliveryBook book;
  std::vector<TaskId> held{1, 2, 3};
  CHECK(source_at_rsu(held, 0, 10.0, book).size() == 3);
  CHECK(held.empty());
  CHECK(source_at_rsu(held, 1, 11.0, book).empty());
  std::vector<TaskId> again{2};
  CHECK(source_at_rsu(again, 1, 20.0, book).empty());
  CHECK(book.duplicate_offers() == 1);
  CHECK(book.size() == 3);
}

TEST_CASE("AQI execution and invalid payloads") {
  TaskId next = 0;
  auto tasks = decompose_tasks(batch_of(0, {1}), AppProfile{}, next, 1);
  execute_aqi(tasks[0], AqiBreakpointTable::epa());
  REQUIRE(tasks[0].result.has_value());
  CHECK(tasks[0].result->value > 0);

  auto b = batch_of(0, {2});
  b.samples[0].readings.resize(2);  // PM2.5 and PM10 only
  tasks = decompose_tasks(b, AppProfile{}, next, 1);
  CHECK(tasks[0].invalid);
  execute_aqi(tasks[0], AqiBreakpointTable::epa());
  CHECK_FALSE(tasks[0].result.has_value());
}
