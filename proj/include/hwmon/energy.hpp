// Sensor energy accounting: transmit/receive/sleep costs and lifetime metrics.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hwmon/core.hpp"

namespace hwmon {

inline constexpr double kTxPowerMinMw = 29.04;
inline constexpr double kTxPowerMaxMw = 57.42;
inline constexpr double kTxAnchorNearM = 4.3;
inline constexpr double kTxAnchorFarM = 45.0;
inline constexpr double kRxPowerMw = 62.0;
inline constexpr double kSleepPowerMw = 0.016;

/// Transmit power needed to reach distance d. Throws OutOfRange when d > R.
double tx_power_mw(double d, const WsnParams& p);

/// Energy of sending `bits` over distance d.
double tx_energy_j(double d, double bits, const WsnParams& wsn, const RadioParams& radio);
double rx_energy_j(double bits, const RadioParams& radio);
double sleep_energy_j(double duration_s);

enum class EnergyCategory : int { Tx = 0, Rx = 1, Sleep = 2 };

/// Per-node energy book. Charges are kept as integer picojoules so that
/// initial == remaining + debits holds exactly.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  EnergyLedger(std::size_t nodes, double initial_energy_j);

  std::size_t size() const noexcept { return remaining_.size(); }
  double initial_energy_j() const noexcept { return initial_; }
  double remaining(NodeId n) const { return static_cast<double>(remaining_.at(n)) * 1e-12; }
  bool alive(NodeId n) const { return !death_.at(n).has_value(); }
  std::optional<double> death_time(NodeId n) const { return death_.at(n); }
  double debited(NodeId n, EnergyCategory c) const {
    return static_cast<double>(debits_.at(n)[static_cast<int>(c)]) * 1e-12;
  }
  double total_debited(EnergyCategory c) const;
  std::uint64_t dead_debit_attempts() const noexcept { return dead_attempts_; }

  /// Debits up to the remaining charge; a node reaching zero dies at `now`.
  /// Returns false (and counts the attempt) when the node was already dead.
  bool debit(NodeId n, double joules, EnergyCategory c, double now);

  /// initial == remaining + sum of debits for every node.
  bool conserved() const;

  /// Time of first death, +infinity when no node has died.
  double network_lifetime() const;
  /// Share of nodes still alive at time t.
  double alive_fraction(double t) const;

 private:
  std::int64_t initial_pj_ = 0;
  double initial_ = 0.0;
  std::vector<std::int64_t> remaining_;
  std::vector<std::array<std::int64_t, 3>> debits_;
  std::vector<std::optional<double>> death_;
  std::uint64_t dead_attempts_ = 0;
};

}  // namespace hwmon
