#include "hwmon/wsn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hwmon {

bool forwarding_check(const SensorNode& receiver, const SensorNode& sender, Position bs, double theta_deg) {
  const auto angle = angle_at(receiver.pos, sender.pos, bs);
  if (!angle) {
    std::ostringstream os;
    os << "forwarding check at node " << receiver.id << ": sender " << sender.id
       << " or base point coincides with the receiver";
    log_warning(os.str());
    return false;
  }
  return *angle <= theta_deg;
}

bool replace_parent_rule(const SensorNode& current_parent, const SensorNode& candidate, const SensorNode& self) {
  return distance(self.pos, current_parent.pos) > distance(self.pos, candidate.pos);
}

NeighborGrid::NeighborGrid(std::span<const SensorNode> nodes, double cell_m) : nodes_(nodes), cell_(cell_m) {
  if (!(cell_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid cell size must be positive");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto key = std::make_pair(static_cast<long>(std::floor(nodes[i].pos.x / cell_)),
                                    static_cast<long>(std::floor(nodes[i].pos.y / cell_)));
    cells_[key].push_back(i);
  }
}

void NeighborGrid::query(Position p, double radius, std::vector<std::size_t>& out) const {
  out.clear();
  const long x0 = static_cast<long>(std::floor((p.x - radius) / cell_));
  const long x1 = static_cast<long>(std::floor((p.x + radius) / cell_));
  const long y0 = static_cast<long>(std::floor((p.y - radius) / cell_));
  const long y1 = static_cast<long>(std::floor((p.y + radius) / cell_));
  for (long cx = x0; cx <= x1; ++cx)
    for (long cy = y0; cy <= y1; ++cy) {
      const auto it = cells_.find({cx, cy});
      if (it == cells_.end()) continue;
      for (auto i : it->second)
        if (distance(nodes_[i].pos, p) <= radius) out.push_back(i);
    }
  std::sort(out.begin(), out.end());
}

namespace {

// Tie extension of the step-d rule: equal distance prefers the richer sender, then the lower id.
bool wins_tie(const SensorNode& current, const SensorNode& candidate, const SensorNode& self) {
  if (distance(self.pos, current.pos) != distance(self.pos, candidate.pos)) return false;
  if (candidate.remaining_energy_j != current.remaining_energy_j)
    return candidate.remaining_energy_j > current.remaining_energy_j;
  return candidate.id < current.id;
}

}  // namespace

ClusterForest form_clusters(std::span<const SensorNode> nodes, const VirtualBasePoint& vbp, const WsnParams& params) {
  return form_clusters(nodes, vbp.pos, params);
}

ClusterForest form_clusters(std::span<const SensorNode> nodes, Position bs, const WsnParams& params) {
  ClusterForest forest;
  if (nodes.empty()) return forest;
  for (const auto& n : nodes)
    if (!(n.remaining_energy_j >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(n.id) + " has negative energy");

  const NeighborGrid grid(nodes, params.range_m);
  std::vector<std::size_t> heard;
  std::vector<std::optional<std::size_t>> parent(nodes.size());

  // Every node broadcasts (id, energy); each receiver handles the messages it hears in input order.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& self = nodes[i];
    grid.query(self.pos, params.range_m, heard);
    for (auto j : heard) {
      if (j == i) continue;
      const auto& sender = nodes[j];
      if (!(sender.remaining_energy_j > self.remaining_energy_j)) continue;
      if (!forwarding_check(self, sender, bs, params.forwarding_angle_deg)) continue;
      if (!parent[i]) {
        parent[i] = j;
      } else {
        const auto& cur = nodes[*parent[i]];
        if (replace_parent_rule(cur, sender, self) || wins_tie(cur, sender, self)) parent[i] = j;
      }
    }
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId id = nodes[i].id;
    if (forest.parent.count(id)) throw Error(ErrorCode::InvalidArgument, "duplicate node id " + std::to_string(id));
    if (parent[i]) {
      forest.parent[id] = nodes[*parent[i]].id;
    } else {
      forest.parent[id] = std::nullopt;
      forest.heads.insert(id);
    }
  }
  // Energy strictly increases along every chain, so the walk terminates.
  for (const auto& n : nodes) {
    NodeId cur = n.id;
    while (const auto& p = forest.parent.at(cur)) cur = *p;
    forest.head_of[n.id] = cur;
  }
  return forest;
}

void apply_forest(std::span<SensorNode> nodes, const ClusterForest& forest) {
  for (auto& n : nodes) {
    const auto it = forest.parent.find(n.id);
    if (it == forest.parent.end()) continue;
    n.parent = it->second;
    n.role = it->second ? Role::Member : Role::ClusterHead;
  }
}

std::set<NodeId> select_rendezvous(std::span<const SensorNode> nodes, const ClusterForest& forest,
                                   double road_half_width_m, double range_m) {
  std::set<NodeId> rn;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes)
    if (forest.heads.count(n.id)) best = std::min(best, std::abs(n.pos.y) - road_half_width_m);
  if (!std::isfinite(best)) return rn;
  for (const auto& n : nodes) {
    if (!forest.heads.count(n.id)) continue;
    if (std::abs(n.pos.y) - road_half_width_m == best) rn.insert(n.id);
  }
  if (best > 2.0 * range_m) {
    // Nothing within reach of the road: keep only the single closest head.
    const NodeId forced = *rn.begin();
    rn = {forced};
  }
  return rn;
}

std::vector<NodeId> intra_cluster_path(NodeId node, const ClusterForest& forest) {
  if (!forest.contains(node)) throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " not in forest");
  std::vector<NodeId> path{node};
  std::set<NodeId> seen{node};
  NodeId cur = node;
  while (true) {
    const auto it = forest.parent.find(cur);
    if (it == forest.parent.end())
      throw Error(ErrorCode::Corrupt, "parent " + std::to_string(cur) + " missing from forest");
    if (!it->second) break;
    cur = *it->second;
    if (!seen.insert(cur).second) throw Error(ErrorCode::Corrupt, "cycle in parent chain at node " + std::to_string(cur));
    path.push_back(cur);
  }
  return path;
}

std::vector<NodeId> inter_cluster_candidates(const SensorNode& ch, std::span<const SensorNode> nodes, Position bs,
                                             const WsnParams& params, const ClusterForest& forest) {
  std::vector<NodeId> out;
  const auto own = forest.head_of.find(ch.id);
  const NodeId own_head = own == forest.head_of.end() ? ch.id : own->second;
  for (const auto& n : nodes) {
    if (n.id == ch.id || distance(n.pos, ch.pos) > params.range_m) continue;
    const auto h = forest.head_of.find(n.id);
    if (h == forest.head_of.end() || h->second == own_head) continue;
    if (!forwarding_check(ch, n, bs, params.forwarding_angle_deg)) continue;
    out.push_back(n.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<NodeId> inter_cluster_next_hop(SensorNode& ch, std::span<const SensorNode> nodes, Position bs,
                                             const WsnParams& params, const ClusterForest& forest) {
  const auto c = inter_cluster_candidates(ch, nodes, bs, params, forest);
  if (c.empty()) return std::nullopt;
  const NodeId next = c[ch.rr_cursor % c.size()];
  ++ch.rr_cursor;
  return next;
}

}  // namespace hwmon
