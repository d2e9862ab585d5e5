#include "hwmon/vanet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace hwmon {

namespace {

double capped(double diff, double cap) {
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "normalisation cap must be positive");
  return std::min(std::abs(diff), cap) / cap;
}

bool eligible(const Vehicle& i, const Vehicle& j, const VanetParams& p) {
  return i.id != j.id && i.direction == j.direction && distance(i.pos, j.pos) <= p.v2v_range_m &&
         mobility_difference(i, j, p) <= p.md_threshold;
}

}  // namespace

double speed_diff(const Vehicle& i, const Vehicle& j, double cap) { return capped(i.speed_mps - j.speed_mps, cap); }
double accel_diff(const Vehicle& i, const Vehicle& j, double cap) { return capped(i.accel_mps2 - j.accel_mps2, cap); }

double mobility_difference(const Vehicle& i, const Vehicle& j, const VanetParams& p) {
  return p.c1 * speed_diff(i, j, p.max_speed_diff_mps) + p.c2 * accel_diff(i, j, p.max_accel_diff_mps2);
}

std::vector<VehicleId> eligible_neighbors(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p) {
  std::vector<VehicleId> u;
  for (const auto& j : neighbors)
    if (eligible(i, j, p)) u.push_back(j.id);
  return u;
}

MobilityStats mobility_stats(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p) {
  MobilityStats s;
  double sd = 0.0, ad = 0.0, d = 0.0;
  for (const auto& j : neighbors) {
    if (!eligible(i, j, p)) continue;
    sd += speed_diff(i, j, p.max_speed_diff_mps);
    ad += accel_diff(i, j, p.max_accel_diff_mps2);
    d += capped(distance(i.pos, j.pos), p.max_distance_m);
    ++s.degree;
  }
  if (s.degree > 0) {
    s.sd_av = sd / s.degree;
    s.ad_av = ad / s.degree;
    s.d_av = d / s.degree;
  }
  return s;
}

double stability_factor(const MobilityStats& s, const VanetParams& p) {
  return p.alpha * s.sd_av + p.beta * s.ad_av + p.gamma * s.d_av + p.delta * static_cast<double>(s.degree);
}

double stability_factor(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p) {
  return stability_factor(mobility_stats(i, neighbors, p), p);
}

std::optional<VehicleId> select_parent(double own_sf, std::span<const std::pair<VehicleId, double>> candidates) {
  std::optional<std::pair<VehicleId, double>> best;
  for (const auto& c : candidates) {
    if (!(c.second > own_sf)) continue;
    if (!best || c.second > best->second || (c.second == best->second && c.first < best->first)) best = c;
  }
  if (!best) return std::nullopt;
  return best->first;
}

namespace {

std::map<VehicleId, std::vector<VehicleId>> children_of(const VanetForest& f) {
  std::map<VehicleId, std::vector<VehicleId>> children;
  for (const auto& [v, p] : f.parent)
    if (p) children[*p].push_back(v);  // map iteration keeps ids ascending
  return children;
}

std::vector<VehicleId> bfs(VehicleId head, const std::map<VehicleId, std::vector<VehicleId>>& children) {
  std::vector<VehicleId> out;
  std::deque<VehicleId> q{head};
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    out.push_back(v);
    if (const auto it = children.find(v); it != children.end())
      for (auto c : it->second) q.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<VehicleId> VanetForest::members(VehicleId head) const { return bfs(head, children_of(*this)); }

std::map<VehicleId, std::vector<VehicleId>> cluster_rosters(const VanetForest& forest) {
  const auto children = children_of(forest);
  std::map<VehicleId, std::vector<VehicleId>> out;
  for (auto h : forest.heads) out[h] = bfs(h, children);
  return out;
}

VanetForest form_vanet_clusters(std::span<const Vehicle> vehicles, const VanetParams& p) {
  VanetForest forest;
  const std::size_t n = vehicles.size();
  // Sweep by x within each direction so only vehicles inside the V2V window are compared.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (vehicles[a].direction != vehicles[b].direction) return vehicles[a].direction < vehicles[b].direction;
    if (vehicles[a].pos.x != vehicles[b].pos.x) return vehicles[a].pos.x < vehicles[b].pos.x;
    return vehicles[a].id < vehicles[b].id;
  });

  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& vi = vehicles[order[a]];
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto& vj = vehicles[order[b]];
      if (vj.direction != vi.direction || vj.pos.x - vi.pos.x > p.v2v_range_m) break;
      // MD is symmetric, so one test covers both directions of the pair.
      if (eligible(vi, vj, p)) {
        nbrs[order[a]].push_back(order[b]);
        nbrs[order[b]].push_back(order[a]);
      }
    }
  }

  // Sum in id order so SF values do not depend on input order.
  for (auto& list : nbrs)
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return vehicles[a].id < vehicles[b].id; });

  std::vector<double> sf(n);
  for (std::size_t i = 0; i < n; ++i) {
    MobilityStats s;
    double sd = 0.0, ad = 0.0, d = 0.0;
    for (auto j : nbrs[i]) {
      sd += speed_diff(vehicles[i], vehicles[j], p.max_speed_diff_mps);
      ad += accel_diff(vehicles[i], vehicles[j], p.max_accel_diff_mps2);
      d += capped(distance(vehicles[i].pos, vehicles[j].pos), p.max_distance_m);
    }
    s.degree = static_cast<int>(nbrs[i].size());
    if (s.degree > 0) {
      s.sd_av = sd / s.degree;
      s.ad_av = ad / s.degree;
      s.d_av = d / s.degree;
    }
    sf[i] = stability_factor(s, p);
    forest.sf[vehicles[i].id] = sf[i];
  }

  std::vector<std::pair<VehicleId, double>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (auto j : nbrs[i]) cand.emplace_back(vehicles[j].id, sf[j]);
    const auto parent = select_parent(sf[i], cand);
    forest.parent[vehicles[i].id] = parent;
    if (!parent) forest.heads.insert(vehicles[i].id);
  }
  // SF strictly increases along each chain, so the walk terminates.
  for (const auto& v : vehicles) {
    VehicleId cur = v.id;
    while (const auto& up = forest.parent.at(cur)) cur = *up;
    forest.head_of[v.id] = cur;
  }
  return forest;
}

void apply_forest(std::span<Vehicle> vehicles, const VanetForest& forest) {
  for (auto& v : vehicles) {
    const auto it = forest.parent.find(v.id);
    if (it == forest.parent.end()) continue;
    v.parent = it->second;
    v.role = it->second ? Role::Member : Role::ClusterHead;
  }
}

}  // namespace hwmon
