#include <doctest.h>

#include <cmath>
#include <limits>

#include "hwmon/energy.hpp"

using namespace hwmon;

namespace {
WsnParams linear() { return WsnParams{}; }
RadioParams radio_250k() {
  RadioParams r;
  r.bitrate_bps = 250000;
  return r;
}
}  // namespace

TEST_CASE("transmit power anchors") {
  CHECK(tx_power_mw(4.3, linear()) == 29.04);
  CHECK(tx_power_mw(45, linear()) == 57.42);
  CHECK(tx_power_mw(24.65, linear()) == doctest::Approx((29.04 + 57.42) / 2).epsilon(1e-12));
  CHECK(tx_power_mw(1.0, linear()) == 29.04);  // floor below the near anchor
  CHECK_THROWS_AS(tx_power_mw(45.5, linear()), Error);
}

TEST_CASE("transmit power is non-decreasing in distance") {
  for (auto model : {TxPowerModel::Linear, TxPowerModel::Quadratic}) {
    WsnParams p;
    p.tx_model = model;
    double prev = 0;
    for (double d = 0; d <= 45.0; d += 0.05) {
      const double w = tx_power_mw(d, p);
      REQUIRE(w >= prev);
      prev = w;
    }
    CHECK(tx_power_mw(45, p) == 57.42);
  }
}

TEST_CASE("message energies") {
  CHECK(tx_energy_j(45, 250000, linear(), radio_250k()) == doctest::Approx(0.05742));
  CHECK(tx_energy_j(4.3, 1000, linear(), radio_250k()) == doctest::Approx(29.04e-3 * 0.004));
  CHECK_THROWS_AS(tx_energy_j(10, 0, linear(), radio_250k()), Error);
  CHECK(rx_energy_j(250000, radio_250k()) == doctest::Approx(0.062));
  CHECK(sleep_energy_j(0) == 0.0);
  CHECK(sleep_energy_j(1000) == doctest::Approx(0.016));
}

TEST_CASE("ledger debits and deaths") {
  EnergyLedger l(3, 500.0);
  CHECK(l.debit(0, 500.0, EnergyCategory::Tx, 12.0));
  CHECK_FALSE(l.alive(0));
  CHECK(*l.death_time(0) == 12.0);

  CHECK(l.debit(1, 0.0, EnergyCategory::Rx, 1.0));
  CHECK(l.remaining(1) == 500.0);

  CHECK(l.debit(2, 200.0, EnergyCategory::Tx, 5.0));
  CHECK(l.alive(2));
  CHECK(l.debit(2, 300.0, EnergyCategory::Rx, 9.0));
  CHECK(*l.death_time(2) == 9.0);

  CHECK_FALSE(l.debit(0, 1.0, EnergyCategory::Sleep, 20.0));
  CHECK(l.dead_debit_attempts() == 1);
  CHECK(l.conserved());
  CHECK(l.network_lifetime() == 9.0);
  CHECK(l.alive_fraction(8.0) == 1.0);
  CHECK(l.alive_fraction(10.0) == doctest::Approx(2.0 / 3.0));
  CHECK(l.alive_fraction(12.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("no deaths means unbounded lifetime") {
  EnergyLedger l(2, 500.0);
  l.debit(0, 1.5, EnergyCategory::Tx, 1.0);
  CHECK(std::isinf(l.network_lifetime()));
  CHECK(l.alive_fraction(1e9) == 1.0);
}

TEST_CASE("conservation is exact over many small debits") {
  EnergyLedger l(1, 500.0);
  for (int i = 0; i < 100000; ++i) l.debit(0, 1.1616e-4, EnergyCategory::Tx, i);
  CHECK(l.conserved());
  CHECK(l.remaining(0) + l.debited(0, EnergyCategory::Tx) == doctest::Approx(500.0).epsilon(1e-15));
}
