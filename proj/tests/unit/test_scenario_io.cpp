#include <filesystem>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "wgqed/scenario_io.hpp"

using namespace wgqed;
using wgqed::test::Gen;

namespace {

std::string describe(const ValidationError& e) { return e.what(); }

}  // namespace

TEST_SUITE("scenario_io") {

TEST_CASE("minimal config") {
  const auto s = parse_scenario(R"({"emitters": [{"z": 0}], "pulse": {"width": 2}})");
  REQUIRE(s.size() == 1);
  CHECK(s.array[0].gamma_wg == 1.0);
  CHECK(s.array[0].gamma_nw == 0.0);
  CHECK(s.array.lambda_a() == 1e-6);
  CHECK(s.array.phi() == doctest::Approx(kPi / 2));
  CHECK(std::get<GaussianPulse>(s.input).width == 2.0);
  CHECK(s.include_nw_coupling);
  CHECK(s.retardation == Retardation::Markovian);
}

TEST_CASE("chain and complex amplitudes") {
  const auto s = parse_scenario(R"({
    "lambda_a": 1e-3,
    "chain": {"count": 3, "spacing_lambda": 0.25, "gamma_nw": 0.1, "detuning_step": 0.5, "z0": 1},
    "initial_excitation": [[0, 0.6], 0.8],
    "include_nw_coupling": false,
    "retardation_mode": "full"
  })");
  REQUIRE(s.size() == 3);
  CHECK(s.array[2].z == doctest::Approx(1.0 + 0.5e-3));
  CHECK(s.array[0].dk == doctest::Approx(0.5));
  CHECK(s.initial(0) == cplx{0.0, 0.6});
  CHECK(s.initial(1) == cplx{0.8, 0.0});
  CHECK_FALSE(s.include_nw_coupling);
  CHECK(s.retardation == Retardation::Full);
}

TEST_CASE("tabulated spectrum config") {
  const auto s = parse_scenario(R"({"emitters": [{"z": 0}],
      "spectrum": {"dk": [-1, 0, 1], "re": [0, 2, 0], "im": [0, 1, 0]}})");
  const auto& t = std::get<TabulatedSpectrum>(s.input);
  CHECK(t.at(0.5) == cplx{1.0, 0.5});
}

TEST_CASE("syntax errors carry a location") {
  try {
    parse_scenario("{\n  \"emitters\": [\n    {\"z\": 0,}\n  ]\n}");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(describe(e).find("line 3") != std::string::npos);
  }
}

TEST_CASE("field errors name the offending path") {
  try {
    parse_scenario(R"({"emitters": [{"z": 0}, {"z": "far", "gamma_wg": 1, "colour": 2}],
                       "retardation_mode": "sometimes"})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = describe(e);
    CHECK(what.find("emitters[1].z: expected a number") != std::string::npos);
    CHECK(what.find("emitters[1].colour: unknown field") != std::string::npos);
    CHECK(what.find("retardation_mode") != std::string::npos);
    CHECK(e.issues().size() == 3);
  }
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(parse_scenario(R"({"emitters": []})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"([1, 2])"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"pulse": {"width": 1}})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"emitters": [{"z": 0}], "chain": {"count": 2, "spacing_lambda": 1}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"emitters": [{"z": 0}], "pulse": {"width": 1},
                                     "spectrum": {"dk": [0, 1], "re": [1, 1]}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"emitters": [{"z": 0, "dk": 1}]})"), ValidationError);
  CHECK_THROWS_AS(parse_scenario(R"({"chain": {"count": 2.5, "spacing_lambda": 1}})"), ValidationError);
}

TEST_CASE("missing files are io errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/dir/scenario.json"), IoError);
}

TEST_CASE("shipped configs round trip idempotently") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(WGQED_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto s = load_scenario(entry.path());
    const std::string once = dump_scenario(s);
    const std::string twice = dump_scenario(parse_scenario(once));
    CHECK(once == twice);
    CHECK(scenario_hash(parse_scenario(once)) == scenario_hash(s));
    ++seen;
  }
  CHECK(seen >= 10);
}

TEST_CASE("random scenarios round trip exactly") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    Scenario s{g.array(7)};
    if (g.coin()) {
      s.input = GaussianPulse{g.uniform(0.1, 30.0), g.uniform(-2.0, 2.0)};
    } else {
      s.initial_excitation.assign(s.size(), cplx{});
      s.initial_excitation[g.index(0, s.size() - 1)] = g.phasor() * g.uniform(0.1, 1.0);
    }
    s.include_nw_coupling = g.coin();
    s.retardation = g.coin() ? Retardation::Full : Retardation::Markovian;
    const auto back = parse_scenario(dump_scenario(s));
    REQUIRE(back.size() == s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(back.array[j].z == s.array[j].z);
      CHECK(back.array[j].gamma_wg == s.array[j].gamma_wg);
      CHECK(back.array[j].gamma_nw == s.array[j].gamma_nw);
      CHECK(back.array[j].dk == s.array[j].dk);
      CHECK(back.initial(j) == s.initial(j));
    }
    CHECK(back.include_nw_coupling == s.include_nw_coupling);
    CHECK(back.retardation == s.retardation);
    CHECK(scenario_hash(back) == scenario_hash(s));
  }
}

TEST_CASE("hash tracks content") {
  const auto a = parse_scenario(R"({"emitters": [{"z": 0}], "pulse": {"width": 2}})");
  const auto b = parse_scenario(R"({"emitters": [{"z": 0}], "pulse": {"width": 2.0000001}})");
  CHECK(scenario_hash(a).size() == 16);
  CHECK(scenario_hash(a) != scenario_hash(b));
  CHECK(scenario_hash(a) == scenario_hash(parse_scenario(R"({"pulse": {"width": 2}, "emitters": [{"z": 0}]})")));
}

}
