#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hwmon/engine.hpp"
#include "hwmon/output.hpp"

using namespace hwmon;

namespace {

ScenarioConfig small(double L = 6, double X = 3, double Y = 500, int Z = 40) {
  ScenarioConfig c;
  c.road_length_km = L;
  c.rsu_spacing_km = X;
  c.vbp_spacing_m = Y;
  c.sensors_per_subarea = Z;
  c.duration_s = 600;
  c.drain_s = 1200;
  return c;
}

bool has_event(const RunResult& r, LogEvent e) {
  return std::any_of(r.log.begin(), r.log.end(), [e](const LogRow& row) { return row.event == e; });
}

}  // namespace

TEST_CASE("RSU and VBP placement") {
  auto c = small(100, 10, 500, 1);
  auto w = build_scenario(c, 1);
  CHECK(w.rsus.size() == 11);
  c = small(100, 5, 500, 1);
  w = build_scenario(c, 1);
  CHECK(w.rsus.size() == 21);
  CHECK(w.vbps.size() == 20 * 9);
  for (int k = 0; k < 9; ++k) CHECK(w.vbps[k].pos.x == doctest::Approx(500.0 * (k + 1)));
  CHECK(w.subareas.size() == 2 * w.vbps.size());
}

TEST_CASE("every sensor sits in its own sub-area") {
  const auto w = build_scenario(small(), 4);
  for (const auto& s : w.subareas)
    for (int i = 0; i < s.sensor_count; ++i) {
      const auto& n = w.sensors[s.first_sensor + i];
      CHECK(n.subarea == s.index);
      CHECK(s.contains(n.pos));
      for (const auto& o : w.subareas)
        if (o.index != s.index) CHECK_FALSE(o.contains(n.pos));
    }
}

TEST_CASE("world dump is reproducible") {
  CHECK(world_dump(build_scenario(small(), 9)) == world_dump(build_scenario(small(), 9)));
  CHECK(world_dump(build_scenario(small(), 9)) != world_dump(build_scenario(small(), 10)));
}

TEST_CASE("invalid config is rejected at build time") {
  auto c = small();
  c.vbp_spacing_m = 4000;
  CHECK_THROWS_AS(build_scenario(c), Error);
}

TEST_CASE("motion without noise is uniform") {
  auto c = small(20, 5, 500, 1);
  c.vehicles.accel_noise_mps2 = 0.0;
  auto w = build_scenario(c, 1);
  w.spawns.clear();
  w.vehicles.clear();
  Vehicle v;
  v.id = 1;
  v.pos = {1000, lane_y(c, Direction::Eastbound, 0)};
  v.speed_mps = v.desired_speed_mps = 30;
  w.vehicles.push_back(v);
  v.id = 2;
  v.direction = Direction::Westbound;
  v.pos = {9000, lane_y(c, Direction::Westbound, 1)};
  w.vehicles.push_back(v);
  for (int k = 1; k <= 200; ++k) {
    mobility_tick(w, 0.5);
    REQUIRE(w.vehicles.size() == 2);
    CHECK(w.vehicles[0].pos.x == 1000 + 30 * 0.5 * k);
    CHECK(w.vehicles[1].pos.x == 9000 - 30 * 0.5 * k);
  }
}

TEST_CASE("vehicles leaving the road are retired") {
  auto c = small(6, 3, 500, 1);
  auto w = build_scenario(c, 1);
  w.spawns.clear();
  w.vehicles.clear();
  Vehicle v;
  v.id = 5;
  v.pos = {5990, -1.75};
  v.speed_mps = v.desired_speed_mps = 30;
  w.vehicles.push_back(v);
  const auto gone = mobility_tick(w, 0.5);
  REQUIRE(gone.size() == 1);
  CHECK(gone[0].id == 5u);
  CHECK(w.vehicles.empty());
}

TEST_CASE("spawns repeat with the seed") {
  auto a = build_scenario(small(), 3), b = build_scenario(small(), 3);
  for (int k = 0; k < 100; ++k) {
    mobility_tick(a, 0.5);
    mobility_tick(b, 0.5);
  }
  REQUIRE(a.vehicles.size() == b.vehicles.size());
  for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
    CHECK(a.vehicles[i].id == b.vehicles[i].id);
    CHECK(a.vehicles[i].pos == b.vehicles[i].pos);
  }
}

TEST_CASE("completion time from the log") {
  std::vector<LogRow> log;
  log.push_back({0.0, ActorKind::Sim, 0, LogEvent::Sense, {}, 0, -1});
  log.push_back({42.0, ActorKind::Rsu, 0, LogEvent::AqiAtRsu, 1, 0, 0});
  CHECK(completion_time(log, 0, 1) == 42.0);
  log.back().time_s = 40;
  log.push_back({55.0, ActorKind::Rsu, 0, LogEvent::AqiAtRsu, 2, 0, 1});
  CHECK(completion_time(log, 0, 2) == 55.0);
  CHECK_FALSE(completion_time(log, 0, 3).has_value());
}

TEST_CASE("both modes deliver every sub-area and pass the audits") {
  const auto w = build_scenario(small(), 2);
  for (auto mode : {Mode::Combined, Mode::WsnOnly}) {
    const auto r = run(w, 600, mode);
    CAPTURE(mode_name(mode));
    for (const auto& p : r.audit.problems) MESSAGE(p);
    CHECK(r.audit.ok());
    REQUIRE(r.periods.size() == 1);
    CHECK(r.periods[0].complete);
    CHECK(r.periods[0].subareas_delivered == static_cast<int>(w.subareas.size()));
    CHECK(r.counters.tasks_delivered == r.counters.tasks_created);
    CHECK(r.ledger.conserved());
    const auto from_log = completion_time(r.log, 0, static_cast<int>(w.subareas.size()));
    REQUIRE(from_log.has_value());
    CHECK(*from_log == r.periods[0].completion_time_s);
  }
}

TEST_CASE("WSN-only runs never talk to vehicles") {
  const auto r = run(build_scenario(small(), 2), 600, Mode::WsnOnly);
  CHECK_FALSE(has_event(r, LogEvent::Adv));
  CHECK_FALSE(has_event(r, LogEvent::Adm));
  CHECK_FALSE(has_event(r, LogEvent::Dispatch));
  CHECK_FALSE(has_event(r, LogEvent::Handoff));
}

TEST_CASE("combined runs offload through vehicles") {
  const auto r = run(build_scenario(small(), 2), 600, Mode::Combined);
  CHECK(has_event(r, LogEvent::Adv));
  CHECK(has_event(r, LogEvent::Handoff));
  CHECK(r.counters.tasks_remote + r.counters.tasks_local + r.counters.tasks_raw_to_rsu > 0);
}

TEST_CASE("event times never go backwards") {
  const auto r = run(build_scenario(small(), 6), 1200, Mode::Combined);
  for (std::size_t i = 1; i < r.log.size(); ++i) REQUIRE(r.log[i].time_s >= r.log[i - 1].time_s);
}

TEST_CASE("same seed, same bytes") {
  const auto w = build_scenario(small(), 8);
  for (auto mode : {Mode::Combined, Mode::WsnOnly}) {
    const auto a = run(w, 600, mode), b = run(w, 600, mode);
    const std::vector<RunResult> ra{a}, rb{b};
    CHECK(metrics_csv(ra) == metrics_csv(rb));
    CHECK(event_log_csv(a) == event_log_csv(b));
  }
}

TEST_CASE("first sensor death matches a hand tally of debits") {
  // One sensor per sub-area: each is its own head and rendezvous node. Per
  // period it pays sleep, a multi-hop transfer of its report to the nearest
  // RSU and, at reformation, one advertisement at full range.
  auto c = small(1, 1, 500, 1);
  c.clustering.initial_energy_j = 0.4;
  c.duration_s = 60 * 600;
  c.drain_s = 600;
  const auto w = build_scenario(c, 1);
  const auto r = run(w, c.duration_s, Mode::WsnOnly, {false});

  auto tx_mw = [](double d) { return d <= 4.3 ? 29.04 : 29.04 + (57.42 - 29.04) * (d - 4.3) / (45.0 - 4.3); };
  auto pj = [](double j) { return std::llround(j * 1e12); };
  double first_death = INFINITY;
  for (const auto& s : w.sensors) {
    double best = INFINITY;
    for (const auto& rsu : w.rsus) best = std::min(best, std::hypot(s.pos.x - rsu.x, s.pos.y - rsu.y));
    const double hops = std::ceil(best / 45.0);
    const double airtime = c.radio.sensor_packet_bits / c.radio.bitrate_bps;
    const long long leg = pj(hops * (tx_mw(best / hops) / 1000.0 * airtime));
    const long long sleep = pj(0.016e-3 * c.sensing_period_s);
    const long long adv = pj(57.42e-3 * c.radio.adv_packet_bits / c.radio.bitrate_bps);
    long long left = pj(c.clustering.initial_energy_j);
    for (int p = 0; p * c.sensing_period_s < c.duration_s; ++p) {
      if (p % c.reformation_factor == 0) left -= adv;
      left -= sleep;
      left -= leg;
      if (left <= 0) {
        first_death = std::min(first_death, p * c.sensing_period_s);
        break;
      }
    }
  }
  REQUIRE(std::isfinite(first_death));
  CHECK(r.counters.network_lifetime_s == first_death);
  CHECK(r.ledger.conserved());
}
