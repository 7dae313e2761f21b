#include "localderiv/scenario.hpp"

#include "localderiv/derivation.hpp"
#include "localderiv/json_io.hpp"
#include "localderiv/oracle.hpp"
#include "localderiv/reconstruct.hpp"
#include "localderiv/rng.hpp"

namespace localderiv {

using nlohmann::json;

std::string to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::Honest: return "honest";
    case GeneratorKind::Noisy: return "noisy";
    case GeneratorKind::Broken: return "broken";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  try {
    shape.validate();
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  if (probe_count < 1) throw ConfigError("probe_count must be >= 1");
  if (tolerances.reconstruct <= 0 || tolerances.verify <= 0 ||
      tolerances.rank <= 0)
    throw ConfigError("tolerances must be positive");
  if (generator == GeneratorKind::Broken) {
    if (broken_kind == BrokenKind::Blockmix && shape.block_count() < 2)
      throw ConfigError("broken:blockmix needs at least two blocks");
    if (broken_kind == BrokenKind::ElementDependent) {
      bool has_matrix_block = false;
      for (std::size_t n : shape.dims) has_matrix_block |= n >= 2;
      if (!has_matrix_block)
        throw ConfigError(
            "broken:element-dependent needs a block of dimension >= 2");
    }
  }
}

void parse_generator_name(const std::string& name, ScenarioConfig& config) {
  if (name == "honest") {
    config.generator = GeneratorKind::Honest;
  } else if (name == "noisy") {
    config.generator = GeneratorKind::Noisy;
  } else if (name.rfind("broken", 0) == 0) {
    config.generator = GeneratorKind::Broken;
    const std::string kind =
        name.size() > 7 && name[6] == ':' ? name.substr(7) : "";
    if (kind == "offset")
      config.broken_kind = BrokenKind::Offset;
    else if (kind == "element-dependent")
      config.broken_kind = BrokenKind::ElementDependent;
    else if (kind == "blockmix")
      config.broken_kind = BrokenKind::Blockmix;
    else
      throw ConfigError("unknown broken kind '" + kind +
                        "' (offset, element-dependent, blockmix)");
  } else {
    throw ConfigError("unknown generator '" + name + "'");
  }
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig config;
  try {
    if (!j.contains("shape")) throw ConfigError("config needs 'shape'");
    config.shape = shape_from_json(j.at("shape"));
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  std::string name = j.value("generator", std::string("honest"));
  if (j.contains("kind") && !j.at("kind").is_null()) {
    if (name != "broken")
      throw ConfigError("'kind' is only meaningful with generator 'broken'");
    if (!j.at("kind").is_string())
      throw ConfigError("'kind' must be a string");
    name = "broken:" + j.at("kind").get<std::string>();
  }
  parse_generator_name(name, config);
  config.seed = j.value("seed", 1ULL);
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    config.tolerances.reconstruct =
        t.value("reconstruct", config.tolerances.reconstruct);
    config.tolerances.verify = t.value("verify", config.tolerances.verify);
    config.tolerances.rank = t.value("rank", config.tolerances.rank);
  }
  config.probe_count = j.value("probe_count", config.probe_count);
  config.validate();
  return config;
}

json config_to_json(const ScenarioConfig& config) {
  json j;
  j["shape"] = shape_to_json(config.shape);
  j["generator"] = to_string(config.generator);
  if (config.generator == GeneratorKind::Broken)
    j["kind"] = to_string(config.broken_kind);
  else
    j["kind"] = nullptr;
  j["seed"] = config.seed;
  j["tolerances"] = {{"reconstruct", config.tolerances.reconstruct},
                     {"verify", config.tolerances.verify},
                     {"rank", config.tolerances.rank}};
  j["probe_count"] = config.probe_count;
  return j;
}

GeneratedScenario generate(const ScenarioConfig& config) {
  config.validate();
  GeneratedScenario out;
  switch (config.generator) {
    case GeneratorKind::Honest: {
      SplitMix64 rng(config.seed);
      out.hidden = random_element(config.shape, rng);
      out.map = make_honest(out.hidden);
      out.has_hidden = true;
      break;
    }
    case GeneratorKind::Noisy: {
      SplitMix64 rng(config.seed);
      out.hidden = random_element(config.shape, rng);
      out.map = make_noisy_witness(out.hidden, config.seed);
      out.has_hidden = true;
      break;
    }
    case GeneratorKind::Broken: {
      try {
        out.map = make_broken(config.broken_kind, config.seed, config.shape);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      break;
    }
  }
  return out;
}

ScenarioOutcome run_scenario(const ScenarioConfig& config) {
  config.validate();
  const GeneratedScenario scenario = generate(config);
  const MapFn& map = scenario.map.evaluate;
  const AlgebraShape& shape = config.shape;
  const Tolerances& tol = config.tolerances;

  ReconstructOptions opts;
  opts.cert_tol = tol.reconstruct;
  opts.verify_tol = tol.verify;
  opts.seed = config.seed ^ 0x9e3779b9ULL;
  const ReconstructionResult rec = reconstruct(map, shape, opts);

  const Certificate lemma = lemma3_certificate(map, shape, tol.reconstruct);

  // Derivation identity checks on the map under test, as diagnostics.
  const auto pair_probes =
      make_probe_pairs(shape, config.probe_count, config.seed ^ 0xabcdULL);
  const auto single_probes =
      make_probes(shape, config.probe_count, config.seed ^ 0x1234ULL);
  const auto scalars = make_scalars(3, config.seed ^ 0x5678ULL);
  const double check_tol = scaled_tolerance(1e-9, pair_probes);
  const std::vector<ProbeReport> checks = {
      check_additive(map, pair_probes, check_tol),
      check_homogeneous(map, single_probes, scalars,
                        scaled_tolerance(1e-9, single_probes)),
      check_jordan(map, single_probes, scaled_tolerance(1e-9, single_probes)),
      check_leibniz(map, pair_probes, check_tol),
  };

  // Oracle comparison over the full matrix-unit probe set.
  std::vector<BlockMatrix> oracle_probes;
  std::vector<BlockMatrix> oracle_values;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        oracle_probes.push_back(matrix_unit(shape, b, i, j));
        oracle_values.push_back(map(oracle_probes.back()));
      }
  }
  const GlobalSolveResult oracle = solve_global(
      oracle_probes, oracle_values, shape, tol.reconstruct, tol.rank);
  const CenterComparison oracle_match =
      equal_mod_center(rec.element.abar, oracle.element, tol.reconstruct);

  json result = result_to_json(rec);
  result["lemma3"] = certificate_to_json(lemma);
  json check_json = json::array();
  bool checks_pass = true;
  for (const auto& c : checks) {
    check_json.push_back(report_to_json(c));
    checks_pass = checks_pass && c.pass;
  }
  result["derivation_checks"] = std::move(check_json);
  json oracle_json = global_solve_to_json(oracle);
  oracle_json["expected_rank_deficiency"] = shape.center_dimension();
  oracle_json["match_distance"] = oracle_match.distance;
  oracle_json["match"] = oracle_match.pass;

  ScenarioOutcome outcome;
  const bool certificates_pass = rec.all_pass() && lemma.pass;
  if (scenario.map.provenance == Provenance::Honest ||
      scenario.map.provenance == Provenance::NoisyWitness) {
    outcome.expected = "pass";
    const CenterComparison hidden_match =
        equal_mod_center(rec.element.abar, scenario.hidden, tol.reconstruct);
    oracle_json["hidden_match"] = hidden_match.pass;
    oracle_json["hidden_distance"] = hidden_match.distance;
    outcome.as_expected = certificates_pass && checks_pass && oracle.ok &&
                          oracle_match.pass && hidden_match.pass;
  } else {
    outcome.expected = "detect";
    outcome.as_expected = !certificates_pass;
  }
  result["oracle"] = std::move(oracle_json);

  json report;
  report["scenario"] = config_to_json(config);
  report["result"] = std::move(result);
  if (scenario.has_hidden) report["hidden"] = matrix_to_json(scenario.hidden);
  report["expected"] = outcome.expected;
  report["as_expected"] = outcome.as_expected;
  outcome.report = std::move(report);
  return outcome;
}

FuzzOutcome fuzz(const std::vector<ScenarioConfig>& templates,
                 std::size_t trials, std::uint64_t base_seed) {
  FuzzOutcome out;
  out.all_ok = true;
  json rows = json::array();
  for (std::size_t t = 0; t < templates.size(); ++t) {
    std::size_t ok = 0;
    json first_unexpected = nullptr;
    for (std::size_t k = 0; k < trials; ++k) {
      ScenarioConfig config = templates[t];
      config.seed = base_seed + k;
      const ScenarioOutcome res = run_scenario(config);
      if (res.as_expected) {
        ++ok;
      } else if (first_unexpected.is_null()) {
        first_unexpected = config.seed;
      }
    }
    json row;
    row["template"] = config_to_json(templates[t]);
    row["trials"] = trials;
    row["as_expected"] = ok;
    row["unexpected"] = trials - ok;
    row["first_unexpected_seed"] = first_unexpected;
    rows.push_back(std::move(row));
    out.all_ok = out.all_ok && ok == trials;
  }
  out.summary["base_seed"] = base_seed;
  out.summary["trials_per_template"] = trials;
  out.summary["templates"] = std::move(rows);
  out.summary["all_ok"] = out.all_ok;
  return out;
}

}  // namespace localderiv
