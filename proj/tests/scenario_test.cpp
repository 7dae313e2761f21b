#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "localderiv/scenario.hpp"

using namespace localderiv;
using nlohmann::json;

TEST_CASE("config parsing") {
  SUBCASE("a full document round-trips") {
    const json doc = {
        {"shape", {{"points", 2}, {"dims", {2, 3}}}},
        {"generator", "broken"},
        {"kind", "blockmix"},
        {"seed", 99},
        {"tolerances",
         {{"reconstruct", 1e-7}, {"verify", 1e-8}, {"rank", 1e-11}}},
        {"probe_count", 50},
    };
    const ScenarioConfig config = config_from_json(doc);
    CHECK(config.shape.points == 2);
    CHECK(config.shape.dims == std::vector<std::size_t>{2, 3});
    CHECK(config.generator == GeneratorKind::Broken);
    CHECK(config.broken_kind == BrokenKind::Blockmix);
    CHECK(config.seed == 99);
    CHECK(config.tolerances.reconstruct == 1e-7);
    CHECK(config.probe_count == 50);

    const ScenarioConfig back = config_from_json(config_to_json(config));
    CHECK(config_to_json(back) == config_to_json(config));
  }

  SUBCASE("defaults apply") {
    const ScenarioConfig config =
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}}});
    CHECK(config.generator == GeneratorKind::Honest);
    CHECK(config.seed == 1);
    CHECK(config.probe_count == 100);
  }

  SUBCASE("invalid documents are rejected") {
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
    CHECK_THROWS_AS(config_from_json({{"generator", "honest"}}), ConfigError);
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", json::array()}}}}),
        ConfigError);
    CHECK_THROWS_AS(config_from_json({{"shape", {{"points", 0}, {"dims", {2}}}}}),
                    ConfigError);
    CHECK_THROWS_AS(
        config_from_json(
            {{"shape", {{"points", 1}, {"dims", {2}}}}, {"generator", "???"}}),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}},
                          {"generator", "broken"},
                          {"kind", "blockmix"}}),
        ConfigError);  // needs two blocks
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}},
                          {"probe_count", 0}}),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}},
                          {"generator", "honest"},
                          {"kind", "offset"}}),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}},
                          {"generator", "broken"}}),
        ConfigError);  // broken requires a kind
    CHECK_THROWS_AS(
        config_from_json({{"shape", {{"points", 1}, {"dims", {2}}}},
                          {"tolerances", {{"verify", -1.0}}}}),
        ConfigError);
  }
}

TEST_CASE("honest scenarios pass end to end") {
  ScenarioConfig config;
  config.shape = AlgebraShape{2, {3}};
  config.generator = GeneratorKind::Honest;
  config.seed = 7;
  config.probe_count = 25;
  const ScenarioOutcome outcome = run_scenario(config);
  CHECK(outcome.expected == "pass");
  CHECK(outcome.as_expected);

  const json& result = outcome.report.at("result");
  for (const auto& cert : result.at("certificates"))
    CHECK(cert.at("pass") == true);
  CHECK(result.at("lemma3").at("pass") == true);
  CHECK(result.at("oracle").at("ok") == true);
  CHECK(result.at("oracle").at("match") == true);
  CHECK(result.at("oracle").at("hidden_match") == true);
  CHECK(result.at("oracle").at("rank_deficiency") ==
        result.at("oracle").at("expected_rank_deficiency"));
  CHECK(outcome.report.contains("hidden"));
  CHECK(outcome.report.at("scenario").at("generator") == "honest");
}

TEST_CASE("broken scenarios are detected") {
  ScenarioConfig config;
  config.shape = AlgebraShape{1, {2}};
  config.generator = GeneratorKind::Broken;
  config.broken_kind = BrokenKind::Offset;
  config.seed = 1;
  config.probe_count = 10;
  const ScenarioOutcome outcome = run_scenario(config);
  CHECK(outcome.expected == "detect");
  CHECK(outcome.as_expected);

  bool some_failure = false;
  for (const auto& cert : outcome.report.at("result").at("certificates"))
    some_failure = some_failure || cert.at("pass") == false;
  CHECK(some_failure);
  CHECK_FALSE(outcome.report.contains("hidden"));
}

TEST_CASE("noisy scenarios pass") {
  ScenarioConfig config;
  config.shape = AlgebraShape{1, {2, 3}};
  config.generator = GeneratorKind::Noisy;
  config.seed = 21;
  config.probe_count = 10;
  const ScenarioOutcome outcome = run_scenario(config);
  CHECK(outcome.as_expected);
}

TEST_CASE("reports are deterministic") {
  ScenarioConfig config;
  config.shape = AlgebraShape{1, {3}};
  config.seed = 5;
  config.probe_count = 10;
  const ScenarioOutcome first = run_scenario(config);
  const ScenarioOutcome second = run_scenario(config);
  CHECK(first.report == second.report);
}

TEST_CASE("fuzz summaries") {
  ScenarioConfig honest;
  honest.shape = AlgebraShape{1, {2}};
  honest.probe_count = 5;

  ScenarioConfig broken = honest;
  broken.generator = GeneratorKind::Broken;
  broken.broken_kind = BrokenKind::Offset;

  SUBCASE("mixed template grid") {
    const FuzzOutcome outcome = fuzz({honest, broken}, 5, 100);
    CHECK(outcome.all_ok);
    CHECK(outcome.summary.at("templates").size() == 2);
    for (const auto& row : outcome.summary.at("templates")) {
      CHECK(row.at("trials") == 5);
      CHECK(row.at("as_expected") == 5);
      CHECK(row.at("unexpected") == 0);
      CHECK(row.at("first_unexpected_seed").is_null());
    }
  }

  SUBCASE("one hundred honest trials all pass") {
    ScenarioConfig big;
    big.shape = AlgebraShape{1, {4}};
    big.probe_count = 20;
    const FuzzOutcome outcome = fuzz({big}, 100, 1);
    CHECK(outcome.all_ok);
    CHECK(outcome.summary.at("templates")[0].at("as_expected") == 100);
  }

  SUBCASE("one hundred broken trials of mixed kinds are all detected") {
    ScenarioConfig offset;
    offset.shape = AlgebraShape{1, {2, 3}};
    offset.probe_count = 10;
    offset.generator = GeneratorKind::Broken;
    offset.broken_kind = BrokenKind::Offset;
    ScenarioConfig element = offset;
    element.broken_kind = BrokenKind::ElementDependent;
    ScenarioConfig blockmix = offset;
    blockmix.broken_kind = BrokenKind::Blockmix;
    const FuzzOutcome outcome = fuzz({offset, element, blockmix}, 34, 1);
    CHECK(outcome.all_ok);
    for (const auto& row : outcome.summary.at("templates"))
      CHECK(row.at("unexpected") == 0);
  }

  SUBCASE("zero trials is an empty success") {
    const FuzzOutcome outcome = fuzz({honest}, 0, 1);
    CHECK(outcome.all_ok);
    CHECK(outcome.summary.at("templates")[0].at("trials") == 0);
  }

  SUBCASE("fuzzing is deterministic in the base seed") {
    const FuzzOutcome a = fuzz({honest}, 3, 7);
    const FuzzOutcome b = fuzz({honest}, 3, 7);
    CHECK(a.summary == b.summary);
  }
}
