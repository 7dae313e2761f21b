#pragma once

// Batch driver: generate a map from a seeded scenario description, run the
// reconstruction pipeline, the pairwise certificate, the derivation checkers
// and the oracle comparison, and emit one machine-readable report.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "localderiv/algebra.hpp"
#include "localderiv/twolocal.hpp"

namespace localderiv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double reconstruct = 1e-8;  // certificates, pair solves, oracle residual
  double verify = 1e-9;       // scaled verification residual
  double rank = 1e-10;        // rank tolerance for nullspace accounting
};

enum class GeneratorKind { Honest, Noisy, Broken };

std::string to_string(GeneratorKind g);

struct ScenarioConfig {
  AlgebraShape shape;
  GeneratorKind generator = GeneratorKind::Honest;
  BrokenKind broken_kind = BrokenKind::Offset;  // only read when broken
  std::uint64_t seed = 1;
  Tolerances tolerances;
  std::size_t probe_count = 100;

  /// Throws ConfigError on invalid shapes, counts, tolerances, or a broken
  /// kind the shape cannot host.
  void validate() const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Parses "honest", "noisy", "broken:offset", "broken:element-dependent",
/// "broken:blockmix". Throws ConfigError otherwise.
void parse_generator_name(const std::string& name, ScenarioConfig& config);

struct ScenarioOutcome {
  nlohmann::json report;
  bool as_expected = false;
  /// Honest and noisy maps must pass everything; broken maps must be flagged
  /// by at least one certificate.
  std::string expected;  // "pass" or "detect"
};

ScenarioOutcome run_scenario(const ScenarioConfig& config);

struct FuzzOutcome {
  nlohmann::json summary;
  bool all_ok = false;
};

/// Runs `trials` per template with seeds base_seed + trial index.
/// Deterministic; the summary is ordered by template then trial.
FuzzOutcome fuzz(const std::vector<ScenarioConfig>& templates,
                 std::size_t trials, std::uint64_t base_seed);

/// Instantiates the configured generator together with the hidden element it
/// was built from (empty for broken kinds, which hide their own elements).
struct GeneratedScenario {
  TwoLocalMap map;
  BlockMatrix hidden;   // meaningful for honest and noisy
  bool has_hidden = false;
};

GeneratedScenario generate(const ScenarioConfig& config);

}  // namespace localderiv
