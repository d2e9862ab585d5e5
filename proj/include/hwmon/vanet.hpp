// Vehicle clustering by mobility similarity: mobility difference, stability
// factor and parent / cluster-head election.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "hwmon/core.hpp"

namespace hwmon {

enum class Direction { Eastbound, Westbound };

struct Vehicle {
  VehicleId id = 0;
  Position pos;
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  Direction direction = Direction::Eastbound;
  int lane = 0;
  std::optional<VehicleId> parent;
  Role role = Role::ClusterHead;
  bool fa = true;  // last ability flag heard from the cluster head
  std::vector<std::uint64_t> task_queue;
  bool registered = true;
  double desired_speed_mps = 0.0;
  double busy_until_s = 0.0;  // end of the last queued computation
};

struct MobilityStats {
  double sd_av = 0.0;
  double ad_av = 0.0;
  double d_av = 0.0;
  int degree = 0;
};

/// min(|v_i - v_j|, cap) / cap.
double speed_diff(const Vehicle& i, const Vehicle& j, double cap);
double accel_diff(const Vehicle& i, const Vehicle& j, double cap);

/// c1 * SD + c2 * AD.
double mobility_difference(const Vehicle& i, const Vehicle& j, const VanetParams& p);

/// Same-direction vehicles within V2V range whose MD does not exceed the threshold.
std::vector<VehicleId> eligible_neighbors(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p);

/// Averages over the eligible set; distance normalised by max_distance_m and capped at 1.
MobilityStats mobility_stats(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p);

/// alpha*SD_av + beta*AD_av + gamma*D_av + delta*degree (raw count).
double stability_factor(const MobilityStats& s, const VanetParams& p);
double stability_factor(const Vehicle& i, std::span<const Vehicle> neighbors, const VanetParams& p);

/// Highest-SF candidate that beats own_sf; ties go to the lower id.
std::optional<VehicleId> select_parent(double own_sf, std::span<const std::pair<VehicleId, double>> candidates);

struct VanetForest {
  std::map<VehicleId, std::optional<VehicleId>> parent;
  std::map<VehicleId, VehicleId> head_of;
  std::map<VehicleId, double> sf;
  std::set<VehicleId> heads;

  /// Members of the cluster headed by `head` (head included), in cluster-tree
  /// order: breadth first from the head, children by id.
  std::vector<VehicleId> members(VehicleId head) const;
};

/// Every cluster's members keyed by head, each in the order of VanetForest::members.
std::map<VehicleId, std::vector<VehicleId>> cluster_rosters(const VanetForest& forest);

/// One synchronous formation round over a snapshot.
VanetForest form_vanet_clusters(std::span<const Vehicle> vehicles, const VanetParams& p);

void apply_forest(std::span<Vehicle> vehicles, const VanetForest& forest);

}  // namespace hwmon
