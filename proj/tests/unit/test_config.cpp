#include <doctest.h>

#include <string>

#include "ngls/config.hpp"
#include "ngls/errors.hpp"

using namespace ngls;

TEST_CASE("family json round-trips every rule") {
  const std::string text = R"({"symbols": [
    {"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]},
    {"id": "L", "kind": "luroth"},
    {"id": "P", "kind": "power", "p": 2.5, "layout": "ascending"},
    {"id": "G", "kind": "geometric", "r": "1/3", "layout": "descending"}
  ]})";
  const Family fam = parse_family(text);
  CHECK(fam.size() == 4);
  CHECK(fam[0].rule() == Rule::finite);
  CHECK(fam[1].rule() == Rule::luroth);
  CHECK(fam[2].power_exponent() == 2.5);
  CHECK(fam[3].geometric_ratio() == rat(1, 3));
  CHECK(fam[3].layout() == Layout::descending);

  const Family again = parse_family(family_to_json(fam));
  CHECK(again.size() == 4);
  for (int s = 0; s < 4; ++s) {
    CHECK(again[s].id() == fam[s].id());
    CHECK(again[s].rule() == fam[s].rule());
  }
  CHECK(again[0].interval_exact(2) == fam[0].interval_exact(2));
  CHECK(again[3].interval_exact(1) == fam[3].interval_exact(1));
}

TEST_CASE("finite orientations survive the round trip") {
  const std::string text = R"({"symbols": [
    {"id": "F", "kind": "finite", "lengths": ["2/3", "1/3"],
     "orientations": ["+", "-"]}
  ]})";
  const Family fam = parse_family(text);
  CHECK(fam[0].orientation(1) == Orientation::increasing);
  CHECK(fam[0].orientation(2) == Orientation::decreasing);
  const Family again = parse_family(family_to_json(fam));
  CHECK(again[0].orientation(2) == Orientation::decreasing);
}

TEST_CASE("config errors carry json-pointer paths") {
  try {
    parse_family(R"({"symbols": [{"id": "L", "kind": "luroth", "p": 2}]})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "/symbols/0/p");
  }

  try {
    parse_family(R"({"symbols": [{"id": "x", "kind": "warp"}]})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "/symbols/0/kind");
  }

  CHECK_THROWS_AS(parse_family("not json"), ConfigError);
  CHECK_THROWS_AS(parse_family(R"({"symbols": []})"), ConfigError);
  CHECK_THROWS_AS(
      parse_family(
          R"({"symbols": [{"id": "F", "kind": "finite", "lengths": ["1/2"]}]})"),
      ConfigError);
}

TEST_CASE("alpha grammar covers bare laws and per-symbol splits") {
  const Family lur = parse_family(R"({"symbols": [{"id": "L", "kind": "luroth"}]})");
  const FrequencyVector geo = parse_alpha(lur, "geometric:1/2");
  CHECK(*geo.alpha_exact(0, 3) == rat(1, 8));
  const FrequencyVector dec = parse_alpha(lur, "geometric:0.5");
  CHECK(*dec.alpha_exact(0, 3) == rat(1, 8));
  const FrequencyVector head = parse_alpha(lur, "head:1/2,1/3,1/6");
  CHECK(*head.alpha_exact(0, 2) == rat(1, 3));
  const FrequencyVector mixed = parse_alpha(lur, "head:1/2+geometric:1/3");
  CHECK(*mixed.alpha_exact(0, 1) == rat(1, 2));
  CHECK(*mixed.alpha_exact(0, 2) == rat(1, 3));
  CHECK(*mixed.tail_mass_from_exact(0, 1) == rat(1, 2));

  const Family two = parse_family(R"({"symbols": [
    {"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]},
    {"id": "L", "kind": "luroth"}]})");
  const FrequencyVector split =
      parse_alpha(two, "B=uniform:2@1/3;L=geometric:1/2@2/3");
  CHECK(split.symbol_mass_exact(0) == rat(1, 3));
  CHECK(*split.alpha_exact(1, 1) == rat(1, 3));
}

TEST_CASE("alpha grammar rejects bad input") {
  const Family two = parse_family(R"({"symbols": [
    {"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]},
    {"id": "L", "kind": "luroth"}]})");
  CHECK_THROWS_AS(parse_alpha(two, "uniform:2"), ConfigError);
  CHECK_THROWS_AS(parse_alpha(two, "B=uniform:2@1/2;L=dirac:1@1/3"),
                  ConfigError);
  CHECK_THROWS_AS(parse_alpha(two, "B=uniform:2@1/2;B=dirac:1@1/2"),
                  ConfigError);
  CHECK_THROWS_AS(parse_alpha(two, "Q=uniform:2@1"), ConfigError);
  CHECK_THROWS_AS(parse_alpha(two, ""), ConfigError);
  const Family lur = parse_family(R"({"symbols": [{"id": "L", "kind": "luroth"}]})");
  CHECK_THROWS_AS(parse_alpha(lur, "bogus:3"), ConfigError);
  CHECK_THROWS_AS(parse_alpha(lur, "power:1"), ConfigError);
}

TEST_CASE("omega grammar") {
  const Family two = parse_family(R"({"symbols": [
    {"id": "B", "kind": "finite", "lengths": ["1/2", "1/2"]},
    {"id": "L", "kind": "luroth"}]})");

  OmegaSequence periodic(two, parse_omega(two, "periodic:B,L", 0));
  CHECK(periodic.at(1) == 0);
  CHECK(periodic.at(2) == 1);
  CHECK(periodic.at(3) == 0);

  OmegaSequence prefixed(two, parse_omega(two, "periodic:B,B|L", 0));
  CHECK(prefixed.at(1) == 0);
  CHECK(prefixed.at(2) == 0);
  CHECK(prefixed.at(5) == 1);

  OmegaSequence woven(two, parse_omega(two, "weave:1/2,1/2", 0));
  CHECK(woven.at(1) >= 0);

  OmegaSequence coin(two, parse_omega(two, "bernoulli:1/4,3/4", 9));
  coin.ensure(10);

  CHECK_THROWS_AS(parse_omega(two, "periodic:B,Q", 0), ConfigError);
  CHECK_THROWS_AS(parse_omega(two, "weave:1/2", 0), ConfigError);
  CHECK_THROWS_AS(parse_omega(two, "drift:1", 0), ConfigError);
}
