#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hwmon/aqi.hpp"

using namespace hwmon;

namespace {

// Hand evaluation of the linear interpolation, kept apart from the library.
double interpolate(double c, double bp_lo, double bp_hi, double i_lo, double i_hi) {
  return (i_hi - i_lo) / (bp_hi - bp_lo) * (c - bp_lo) + i_lo;
}

PollutantReading reading(Pollutant p, double c) {
  PollutantReading r;
  r.pollutant = p;
  r.concentration = c;
  return r;
}

}  // namespace

TEST_CASE("worked PM10 example") {
  const BreakpointRow row{155, 254, 101, 150};
  const double v = sub_index(162, row);
  CHECK(v == doctest::Approx(interpolate(162, 155, 254, 101, 150)).epsilon(1e-12));
  CHECK(v == doctest::Approx(104.46).epsilon(0.005 / 104.46));
  const auto s = sub_index(162, Pollutant::PM10, AqiBreakpointTable::epa());
  CHECK(s.value == doctest::Approx(v));
  CHECK_FALSE(s.out_of_range);
}

TEST_CASE("max rule over sub-indices") {
  const std::vector<std::pair<Pollutant, double>> subs{
      {Pollutant::PM25, 104.46}, {Pollutant::PM10, 132.54}, {Pollutant::O3, 115.12}};
  const auto r = compute_aqi(subs);
  CHECK(r.value == 132.54);
  CHECK(r.dominant == Pollutant::PM10);
  CHECK(r.reported() == doctest::Approx(132.54));
}

TEST_CASE("equal sub-indices: first pollutant in fixed order dominates") {
  const std::vector<std::pair<Pollutant, double>> subs{{Pollutant::NO2, 80}, {Pollutant::PM10, 80}, {Pollutant::CO, 80}};
  const auto r = compute_aqi(subs);
  CHECK(r.value == 80);
  CHECK(r.dominant == Pollutant::PM10);
}

TEST_CASE("endpoints map exactly") {
  const auto& t = AqiBreakpointTable::epa();
  for (int p = 0; p < kPollutantCount; ++p) {
    const auto pol = static_cast<Pollutant>(p);
    for (const auto& row : t.rows(pol)) {
      CHECK(sub_index(row.bp_lo, pol, t).value == row.i_lo);
      CHECK(sub_index(row.bp_hi, pol, t).value == row.i_hi);
    }
  }
}

TEST_CASE("concentration above the table clamps to 500") {
  const auto s = sub_index(10000, Pollutant::PM10, AqiBreakpointTable::epa());
  CHECK(s.value == 500);
  CHECK(s.out_of_range);
  CHECK_THROWS_AS(sub_index(-1, Pollutant::PM10, AqiBreakpointTable::epa()), Error);
}

TEST_CASE("monotone over random concentrations") {
  const auto& t = AqiBreakpointTable::epa();
  std::mt19937_64 gen(11);
  for (int p = 0; p < kPollutantCount; ++p) {
    const auto pol = static_cast<Pollutant>(p);
    const double top = t.rows(pol).back().bp_hi;
    std::uniform_real_distribution<double> dist(0.0, top * 1.1);
    std::vector<double> cs(10000);
    for (auto& c : cs) c = dist(gen);
    std::sort(cs.begin(), cs.end());
    double prev = -1;
    for (double c : cs) {
      const double v = sub_index(c, pol, t).value;
      REQUIRE(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("categories") {
  CHECK(category(0).category == AqiCategory::Good);
  CHECK(category(104.46).category == AqiCategory::UnhealthySensitive);
  CHECK(category(500).category == AqiCategory::Hazardous);
  CHECK_THROWS_AS(category(501), Error);
  CHECK_THROWS_AS(category(-0.5), Error);
}

TEST_CASE("validity rule") {
  const std::vector<PollutantReading> two{reading(Pollutant::CO, 1.0), reading(Pollutant::O3, 0.03)};
  CHECK_FALSE(aqi_inputs_valid(two));
  CHECK_THROWS_AS(compute_aqi(two, AqiBreakpointTable::epa()), AqiValidityError);

  const std::vector<PollutantReading> no_pm{reading(Pollutant::CO, 1.0), reading(Pollutant::O3, 0.03),
                                            reading(Pollutant::NO2, 30)};
  CHECK_FALSE(aqi_inputs_valid(no_pm));

  const std::vector<PollutantReading> ok{reading(Pollutant::PM10, 162), reading(Pollutant::O3, 0.03),
                                         reading(Pollutant::NO2, 30)};
  CHECK(aqi_inputs_valid(ok));
  CHECK(compute_aqi(ok, AqiBreakpointTable::epa()).dominant == Pollutant::PM10);
}

TEST_CASE("readings are averaged per pollutant and order does not matter") {
  std::vector<PollutantReading> rs{reading(Pollutant::PM10, 150), reading(Pollutant::PM10, 174),
                                   reading(Pollutant::CO, 2.0),   reading(Pollutant::NO2, 20),
                                   reading(Pollutant::SO2, 10)};
  const auto a = compute_aqi(rs, AqiBreakpointTable::epa());
  CHECK(a.sub_indices[static_cast<int>(Pollutant::PM10)].value() ==
        doctest::Approx(interpolate(162, 155, 254, 101, 150)));
  std::reverse(rs.begin(), rs.end());
  const auto b = compute_aqi(rs, AqiBreakpointTable::epa());
  CHECK(a.value == b.value);
  CHECK(a.dominant == b.dominant);
}

TEST_CASE("table parser rejects broken chains") {
  CHECK_NOTHROW(parse_breakpoint_table(epa_breakpoint_text()));
  CHECK_THROWS_AS(parse_breakpoint_table("PM10 0 54 0 50\nPM10 55 154 60 100\n"), Error);
  CHECK_THROWS_AS(parse_breakpoint_table("PM10 0 54 0 50\nFOO 1 2 3 4\n"), Error);
}

TEST_CASE("pollutant names") {
  CHECK(pollutant_from_name("PM2.5") == Pollutant::PM25);
  CHECK(pollutant_name(Pollutant::SO2) == "SO2");
  CHECK_FALSE(pollutant_from_name("dust").has_value());
}
