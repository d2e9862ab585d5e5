// Energy-balanced sensor clustering: parent election toward a base point,
// cluster-head detection, intra/inter-cluster routing and rendezvous nodes.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hwmon/core.hpp"

namespace hwmon {

struct SensorNode {
  NodeId id = 0;
  Position pos;
  double remaining_energy_j = 0.0;
  std::optional<NodeId> parent;
  Role role = Role::ClusterHead;
  int subarea = 0;
  std::size_t rr_cursor = 0;
};

/// Sink location of one group of sub-areas, on the road axis.
struct VirtualBasePoint {
  int index = 0;
  Position pos;
  double x_lo = 0.0;  // pos.x - Y/2
  double x_hi = 0.0;  // pos.x + Y/2
};

struct ClusterForest {
  std::map<NodeId, std::optional<NodeId>> parent;
  std::map<NodeId, NodeId> head_of;  // node -> its cluster head
  std::set<NodeId> heads;
  std::set<NodeId> rendezvous;

  bool contains(NodeId n) const { return parent.count(n) != 0; }
};

/// Receiver-side direction test: the sender lies within `theta_deg` of the
/// receiver->base-point direction. Coincident points count as a failed check.
bool forwarding_check(const SensorNode& receiver, const SensorNode& sender, Position bs, double theta_deg);

/// Parent replacement on a later advertisement: strictly closer wins.
bool replace_parent_rule(const SensorNode& current_parent, const SensorNode& candidate, const SensorNode& self);

/// Replays the neighbour advertisement protocol over a snapshot. Each node
/// processes advertisements in input order, adopting a strictly richer
/// in-cone sender as parent and switching to closer ones. Ties on distance
/// go to the richer sender, then to the lower id.
ClusterForest form_clusters(std::span<const SensorNode> nodes, const VirtualBasePoint& vbp, const WsnParams& params);
ClusterForest form_clusters(std::span<const SensorNode> nodes, Position bs, const WsnParams& params);

/// Writes parent/role from the forest back onto the nodes.
void apply_forest(std::span<SensorNode> nodes, const ClusterForest& forest);

/// Cluster heads closest to the road edge (lateral distance |y| - half_width)
/// among those within 2R; when none qualifies the closest head is forced.
std::set<NodeId> select_rendezvous(std::span<const SensorNode> nodes, const ClusterForest& forest,
                                   double road_half_width_m, double range_m);

/// Parent chain from `node` up to and including its cluster head.
/// Throws Error(Corrupt) on a cycle and Error(InvalidArgument) for unknown nodes.
std::vector<NodeId> intra_cluster_path(NodeId node, const ClusterForest& forest);

/// Neighbours of `ch` (within R, other cluster, inside the forwarding cone),
/// sorted by id.
std::vector<NodeId> inter_cluster_candidates(const SensorNode& ch, std::span<const SensorNode> nodes, Position bs,
                                             const WsnParams& params, const ClusterForest& forest);

/// Next inter-cluster hop in round-robin order; advances ch.rr_cursor per call.
std::optional<NodeId> inter_cluster_next_hop(SensorNode& ch, std::span<const SensorNode> nodes, Position bs,
                                             const WsnParams& params, const ClusterForest& forest);

/// Uniform grid over node positions for radius queries.
class NeighborGrid {
 public:
  NeighborGrid(std::span<const SensorNode> nodes, double cell_m);
  /// Indices (into the span given at construction) of nodes within `radius` of p.
  void query(Position p, double radius, std::vector<std::size_t>& out) const;

 private:
  std::span<const SensorNode> nodes_;
  double cell_;
  std::map<std::pair<long, long>, std::vector<std::size_t>> cells_;
};

}  // namespace hwmon
