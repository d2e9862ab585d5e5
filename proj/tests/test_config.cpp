#include <doctest.h>

#include "hwmon/core.hpp"

using namespace hwmon;

TEST_CASE("sections prefix keys") {
  const auto c = parse_config(R"(
road_length_km = 25   # short highway
[radio]
bitrate_bps = 125000
[offload]
local_keep = 2
)");
  CHECK(c.road_length_km == 25.0);
  CHECK(c.radio.bitrate_bps == 125000.0);
  CHECK(c.offload.local_keep == 2);
}

TEST_CASE("dotted keys at top level") {
  const auto c = parse_config("vanet.md_threshold = 0.4\n");
  CHECK(c.vanet.md_threshold == 0.4);
}

TEST_CASE("text round trip") {
  ScenarioConfig a;
  a.road_length_km = 42;
  a.vanet.alpha = 0.4;
  a.vanet.beta = 0.1;
  a.clustering.tx_model = TxPowerModel::Quadratic;
  a.seed = 99;
  const auto b = parse_config(config_to_text(a));
  CHECK(config_to_text(b) == config_to_text(a));
  CHECK(b.clustering.tx_model == TxPowerModel::Quadratic);
  CHECK(b.seed == 99);
}

TEST_CASE("unknown keys and bad values are parse errors") {
  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("road_length_km = fast\n"), Error);
  CHECK_THROWS_AS(parse_config("lanes_per_direction = 2.5\n"), Error);
  CHECK_THROWS_AS(parse_config("[radio\n"), Error);
  try {
    parse_config("road_length_km = 5\nbogus = 1\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("set and get by key") {
  ScenarioConfig c;
  set_config_value(c, "rsu_spacing_km", "3");
  CHECK(get_config_value(c, "rsu_spacing_km") == "3");
  set_config_value(c, "wsn.tx_model", "\"quadratic\"");
  CHECK(get_config_value(c, "wsn.tx_model") == "\"quadratic\"");
  CHECK_THROWS_AS(get_config_value(c, "nope"), Error);
}

TEST_CASE("every documented key can be read back") {
  ScenarioConfig c;
  for (const auto& k : config_keys()) {
    CAPTURE(k.key);
    const auto v = get_config_value(c, k.key);
    ScenarioConfig d;
    set_config_value(d, k.key, v);
    CHECK(get_config_value(d, k.key) == v);
  }
}

TEST_CASE("missing config file") { CHECK_THROWS_AS(load_config("/nonexistent/file.toml"), Error); }
