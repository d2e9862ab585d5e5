#include "hwmon/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hwmon {

namespace {
constexpr double kPjPerJ = 1e12;
std::int64_t to_pj(double joules) { return static_cast<std::int64_t>(std::llround(joules * kPjPerJ)); }
}  // namespace

double tx_power_mw(double d, const WsnParams& p) {
  if (!(d >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative transmit distance");
  if (d > p.range_m) {
    std::ostringstream os;
    os << "transmit distance " << d << " m exceeds radio range " << p.range_m << " m";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  if (d <= kTxAnchorNearM) return kTxPowerMinMw;
  double frac = 0.0;
  if (p.tx_model == TxPowerModel::Linear)
    frac = (d - kTxAnchorNearM) / (kTxAnchorFarM - kTxAnchorNearM);
  else
    frac = (d * d - kTxAnchorNearM * kTxAnchorNearM) / (kTxAnchorFarM * kTxAnchorFarM - kTxAnchorNearM * kTxAnchorNearM);
  // Ranges beyond 45 m extrapolate along the same law.
  return kTxPowerMinMw + (kTxPowerMaxMw - kTxPowerMinMw) * frac;
}

double tx_energy_j(double d, double bits, const WsnParams& wsn, const RadioParams& radio) {
  if (!(bits > 0.0)) throw Error(ErrorCode::InvalidArgument, "message size must be > 0 bits");
  return tx_power_mw(d, wsn) / 1000.0 * bits / radio.bitrate_bps;
}

double rx_energy_j(double bits, const RadioParams& radio) {
  if (!(bits > 0.0)) throw Error(ErrorCode::InvalidArgument, "message size must be > 0 bits");
  return kRxPowerMw / 1000.0 * bits / radio.bitrate_bps;
}

double sleep_energy_j(double duration_s) {
  if (!(duration_s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative sleep duration");
  return kSleepPowerMw / 1000.0 * duration_s;
}

EnergyLedger::EnergyLedger(std::size_t nodes, double initial_energy_j)
    : initial_pj_(to_pj(initial_energy_j)),
      initial_(initial_energy_j),
      remaining_(nodes, initial_pj_),
      debits_(nodes, {0, 0, 0}),
      death_(nodes) {}

bool EnergyLedger::debit(NodeId n, double joules, EnergyCategory c, double now) {
  if (!(joules >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative energy debit");
  if (death_.at(n)) {
    ++dead_attempts_;
    return false;
  }
  const std::int64_t amount = std::min(to_pj(joules), remaining_[n]);
  remaining_[n] -= amount;
  debits_[n][static_cast<int>(c)] += amount;
  if (remaining_[n] == 0 && joules > 0.0) death_[n] = now;
  return true;
}

double EnergyLedger::total_debited(EnergyCategory c) const {
  std::int64_t sum = 0;
  for (const auto& d : debits_) sum += d[static_cast<int>(c)];
  return static_cast<double>(sum) / kPjPerJ;
}

bool EnergyLedger::conserved() const {
  for (std::size_t i = 0; i < remaining_.size(); ++i) {
    const auto& d = debits_[i];
    if (remaining_[i] < 0 || remaining_[i] + d[0] + d[1] + d[2] != initial_pj_) return false;
  }
  return true;
}

double EnergyLedger::network_lifetime() const {
  double first = std::numeric_limits<double>::infinity();
  for (const auto& d : death_)
    if (d) first = std::min(first, *d);
  return first;
}

double EnergyLedger::alive_fraction(double t) const {
  if (death_.empty()) return 1.0;
  std::size_t alive = 0;
  for (const auto& d : death_)
    if (!d || *d > t) ++alive;
  return static_cast<double>(alive) / static_cast<double>(death_.size());
}

}  // namespace hwmon
