// Reference implementations written directly from the rule statements, used
// to cross-check the library. Deliberately naive: no grids, no sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "hwmon/vanet.hpp"
#include "hwmon/wsn.hpp"

namespace oracle {

using hwmon::NodeId;
using hwmon::Position;
using hwmon::VehicleId;

inline double dist(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Angle at p between p->a and p->b, degrees.
inline std::optional<double> angle(Position p, Position a, Position b) {
  const double ax = a.x - p.x, ay = a.y - p.y, bx = b.x - p.x, by = b.y - p.y;
  if ((ax == 0 && ay == 0) || (bx == 0 && by == 0)) return std::nullopt;
  const double cross = ax * by - ay * bx;
  const double dot = ax * bx + ay * by;
  return std::atan2(std::abs(cross), dot) * 180.0 / std::acos(-1.0);
}

// Every node independently picks, among all others, the closest sender that is
// in range, strictly richer and inside the cone toward the base point; ties on
// distance prefer more energy, then the lower id.
inline std::map<NodeId, std::optional<NodeId>> wsn_parents(const std::vector<hwmon::SensorNode>& nodes, Position bs,
                                                             double range, double theta) {
  std::map<NodeId, std::optional<NodeId>> out;
  for (const auto& i : nodes) {
    const hwmon::SensorNode* best = nullptr;
    double best_d = 0;
    for (const auto& j : nodes) {
      if (j.id == i.id) continue;
      const double d = dist(i.pos, j.pos);
      if (d > range || !(j.remaining_energy_j > i.remaining_energy_j)) continue;
      const auto a = angle(i.pos, j.pos, bs);
      if (!a || *a > theta) continue;
      const bool better = !best || d < best_d ||
                          (d == best_d && (j.remaining_energy_j > best->remaining_energy_j ||
                                           (j.remaining_energy_j == best->remaining_energy_j && j.id < best->id)));
      if (better) {
        best = &j;
        best_d = d;
      }
    }
    out[i.id] = best ? std::optional<NodeId>(best->id) : std::nullopt;
  }
  return out;
}

// Random sub-area on the north side of the road: x in [0, width), y in
// [10.5, 10.5 + depth). Energies drawn from a few levels so ties occur.
inline std::vector<hwmon::SensorNode> random_subarea(std::mt19937_64& gen, int n, double width, double depth) {
  std::uniform_real_distribution<double> ux(0.0, width), uy(10.5, 10.5 + depth);
  std::uniform_int_distribution<int> level(0, 5);
  std::vector<hwmon::SensorNode> nodes(n);
  for (int k = 0; k < n; ++k) {
    nodes[k].id = static_cast<NodeId>(k * 3 + 1);
    nodes[k].pos = {ux(gen), uy(gen)};
    nodes[k].remaining_energy_j = 400.0 + 20.0 * level(gen);
  }
  return nodes;
}

struct VanetOracle {
  std::map<VehicleId, double> sf;
  std::map<VehicleId, std::optional<VehicleId>> parent;
};

inline bool eligible(const hwmon::Vehicle& i, const hwmon::Vehicle& j, const hwmon::VanetParams& p) {
  if (i.id == j.id || i.direction != j.direction || dist(i.pos, j.pos) > p.v2v_range_m) return false;
  const double sd = std::min(std::abs(i.speed_mps - j.speed_mps), p.max_speed_diff_mps) / p.max_speed_diff_mps;
  const double ad = std::min(std::abs(i.accel_mps2 - j.accel_mps2), p.max_accel_diff_mps2) / p.max_accel_diff_mps2;
  return p.c1 * sd + p.c2 * ad <= p.md_threshold;
}

// Exhaustive: SF for every vehicle from its eligible set, then the argmax
// eligible neighbour whose SF exceeds the vehicle's own (lower id on ties).
inline VanetOracle vanet(std::vector<hwmon::Vehicle> vs, const hwmon::VanetParams& p) {
  std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  VanetOracle o;
  for (const auto& i : vs) {
    double sd = 0, ad = 0, dd = 0;
    int deg = 0;
    for (const auto& j : vs) {
      if (!eligible(i, j, p)) continue;
      sd += std::min(std::abs(i.speed_mps - j.speed_mps), p.max_speed_diff_mps) / p.max_speed_diff_mps;
      ad += std::min(std::abs(i.accel_mps2 - j.accel_mps2), p.max_accel_diff_mps2) / p.max_accel_diff_mps2;
      dd += std::min(dist(i.pos, j.pos), p.max_distance_m) / p.max_distance_m;
      ++deg;
    }
    const double n = deg > 0 ? deg : 1;
    o.sf[i.id] = p.alpha * (sd / n) + p.beta * (ad / n) + p.gamma * (dd / n) + p.delta * deg;
  }
  for (const auto& i : vs) {
    std::optional<VehicleId> best;
    for (const auto& j : vs) {
      if (!eligible(i, j, p) || !(o.sf[j.id] > o.sf[i.id])) continue;
      if (!best || o.sf[j.id] > o.sf[*best] || (o.sf[j.id] == o.sf[*best] && j.id < *best)) best = j.id;
    }
    o.parent[i.id] = best;
  }
  return o;
}

// Vehicles on a stretch of road in both directions with clustered speeds.
inline std::vector<hwmon::Vehicle> random_snapshot(std::mt19937_64& gen, int n, double length) {
  std::uniform_real_distribution<double> ux(0.0, length), speed(25.0, 35.0), accel(-1.5, 1.5), u01(0.0, 1.0);
  std::uniform_int_distribution<int> lane(0, 2);
  std::vector<hwmon::Vehicle> vs(n);
  for (int k = 0; k < n; ++k) {
    auto& v = vs[k];
    v.id = static_cast<VehicleId>(k * 2 + 5);
    v.direction = u01(gen) < 0.5 ? hwmon::Direction::Eastbound : hwmon::Direction::Westbound;
    v.lane = lane(gen);
    const double y = (v.lane + 0.5) * 3.5;
    v.pos = {ux(gen), v.direction == hwmon::Direction::Eastbound ? -y : y};
    // Some vehicles share exact speeds so SF ties are exercised.
    v.speed_mps = u01(gen) < 0.3 ? 30.0 : speed(gen);
    v.accel_mps2 = u01(gen) < 0.3 ? 0.0 : accel(gen);
  }
  return vs;
}

}  // namespace oracle
