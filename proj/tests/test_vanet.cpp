#include <doctest.h>

#include <random>

#include "hwmon/vanet.hpp"
#include "oracles.hpp"

using namespace hwmon;

namespace {

Vehicle car(VehicleId id, double x, double v, double a = 0.0, Direction d = Direction::Eastbound) {
  Vehicle c;
  c.id = id;
  c.pos = {x, d == Direction::Eastbound ? -1.75 : 1.75};
  c.speed_mps = v;
  c.accel_mps2 = a;
  c.direction = d;
  return c;
}

}  // namespace

TEST_CASE("speed difference normalisation") {
  CHECK(speed_diff(car(1, 0, 30), car(2, 0, 30), 20) == 0.0);
  CHECK(speed_diff(car(1, 0, 30), car(2, 0, 50), 20) == 1.0);
  CHECK(speed_diff(car(1, 0, 30), car(2, 0, 35), 20) == doctest::Approx(0.25));
  CHECK(speed_diff(car(1, 0, 30), car(2, 0, 90), 20) == 1.0);
}

TEST_CASE("mobility difference") {
  VanetParams p;
  p.max_speed_diff_mps = 10;
  p.max_accel_diff_mps2 = 1;
  CHECK(mobility_difference(car(1, 0, 30), car(2, 0, 30), p) == 0.0);
  CHECK(mobility_difference(car(1, 0, 30, 0), car(2, 0, 32, 0.4), p) == doctest::Approx(0.3));
  CHECK(mobility_difference(car(1, 0, 30, 0), car(2, 0, 40, 1), p) == doctest::Approx(1.0));
}

TEST_CASE("eligible neighbours") {
  VanetParams p;
  p.max_speed_diff_mps = 10;
  p.max_accel_diff_mps2 = 1;
  p.md_threshold = 0.3;
  const auto me = car(1, 0, 30);
  CHECK(eligible_neighbors(me, {}, p).empty());
  // MD exactly at the threshold is included.
  const std::vector<Vehicle> at{car(2, 50, 36)};
  CHECK(eligible_neighbors(me, at, p) == std::vector<VehicleId>{2});
  const std::vector<Vehicle> opposite{car(3, 50, 30, 0, Direction::Westbound)};
  CHECK(eligible_neighbors(me, opposite, p).empty());
  const std::vector<Vehicle> far{car(4, 301, 30)};
  CHECK(eligible_neighbors(me, far, p).empty());
}

TEST_CASE("stability factor") {
  const VanetParams p;
  CHECK(stability_factor(car(1, 0, 30), std::span<const Vehicle>{}, p) == 0.0);
  MobilityStats s;
  s.degree = 4;
  CHECK(stability_factor(s, p) == doctest::Approx(1.0));
  s = {0.2, 0.2, 0.2, 2};
  CHECK(stability_factor(s, p) == doctest::Approx(0.65));
}

TEST_CASE("parent selection") {
  CHECK_FALSE(select_parent(0.5, {}).has_value());
  const std::vector<std::pair<VehicleId, double>> a{{1, 0.4}, {2, 0.7}};
  CHECK(select_parent(0.5, a) == 2u);
  const std::vector<std::pair<VehicleId, double>> b{{1, 0.4}, {2, 0.45}};
  CHECK_FALSE(select_parent(0.5, b).has_value());
  const std::vector<std::pair<VehicleId, double>> tie{{9, 0.7}, {3, 0.7}};
  CHECK(select_parent(0.5, tie) == 3u);
}

TEST_CASE("three-vehicle platoon elects the middle") {
  const std::vector<Vehicle> vs{car(1, 0, 30), car(2, 100, 30), car(3, 200, 30)};
  VanetParams p;
  p.v2v_range_m = 150;
  const auto f = form_vanet_clusters(vs, p);
  CHECK(f.heads == std::set<VehicleId>{2});
  CHECK(f.parent.at(1) == 2u);
  CHECK(f.parent.at(3) == 2u);
  CHECK(f.members(2) == std::vector<VehicleId>{2, 1, 3});
}

TEST_CASE("opposite streams never share a cluster") {
  std::vector<Vehicle> vs;
  for (int k = 0; k < 5; ++k) {
    vs.push_back(car(k, k * 50.0, 30));
    vs.push_back(car(100 + k, k * 50.0, 30, 0, Direction::Westbound));
  }
  const auto f = form_vanet_clusters(vs, VanetParams{});
  int heads_east = 0, heads_west = 0;
  for (const auto& v : vs) {
    if (const auto p = f.parent.at(v.id)) CHECK((*p >= 100) == (v.id >= 100));
    if (f.heads.count(v.id)) ++(v.id >= 100 ? heads_west : heads_east);
  }
  CHECK(heads_east >= 1);
  CHECK(heads_west >= 1);
}

TEST_CASE("single vehicle is a head") {
  const std::vector<Vehicle> vs{car(8, 0, 30)};
  const auto f = form_vanet_clusters(vs, VanetParams{});
  CHECK(f.heads == std::set<VehicleId>{8});
}

TEST_CASE("formation matches the exhaustive oracle") {
  std::mt19937_64 gen(77);
  const VanetParams p;
  for (int trial = 0; trial < 300; ++trial) {
    const auto vs = oracle::random_snapshot(gen, 1 + trial % 10, 800);
    const auto f = form_vanet_clusters(vs, p);
    const auto o = oracle::vanet(vs, p);
    for (const auto& v : vs) {
      REQUIRE(f.sf.at(v.id) == o.sf.at(v.id));
      REQUIRE(f.parent.at(v.id) == o.parent.at(v.id));
    }
  }
}

TEST_CASE("rosters cover every vehicle once") {
  std::mt19937_64 gen(3);
  const auto vs = oracle::random_snapshot(gen, 50, 2000);
  const auto f = form_vanet_clusters(vs, VanetParams{});
  std::set<VehicleId> seen;
  for (const auto& [head, members] : cluster_rosters(f)) {
    CHECK(members.front() == head);
    for (auto m : members) {
      CHECK(seen.insert(m).second);
      CHECK(f.head_of.at(m) == head);
    }
  }
  CHECK(seen.size() == vs.size());
}
