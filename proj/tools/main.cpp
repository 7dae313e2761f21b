// Command-line driver: run a single scenario, fuzz a grid of scenario
// templates, or pretty-print a matrix JSON file.
//
// Exit codes: 0 expected outcome, 1 unexpected certificate result,
//             2 usage or config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "localderiv/json_io.hpp"
#include "localderiv/scenario.hpp"

namespace {

using localderiv::ConfigError;
using localderiv::ScenarioConfig;
using nlohmann::json;

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) throw ConfigError("empty block dimension in --dims");
    std::size_t pos = 0;
    long value = 0;
    try {
      value = std::stol(part, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad block dimension '" + part + "'");
    }
    if (pos != part.size() || value < 1)
      throw ConfigError("bad block dimension '" + part + "'");
    dims.push_back(static_cast<std::size_t>(value));
  }
  if (dims.empty()) throw ConfigError("--dims needs at least one block");
  return dims;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error in ") + path + ": " +
                      e.what());
  }
  return j;
}

void write_output(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write " + out_path);
  out << doc.dump(2) << "\n";
}

struct ScenarioFlags {
  std::string config_path;
  std::string dims;
  std::optional<std::size_t> points;
  std::string generator;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> rank_tol;
  std::optional<std::size_t> probes;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "scenario config JSON file");
    app.add_option("--dims", dims, "block dimensions, e.g. 2,3");
    app.add_option("--points", points, "number of points of X");
    app.add_option("--generator", generator,
                   "honest | noisy | broken:offset | "
                   "broken:element-dependent | broken:blockmix");
    app.add_option("--seed", seed, "scenario seed");
    app.add_option("--tol", tol, "reconstruction and verification tolerance");
    app.add_option("--rank-tol", rank_tol, "rank tolerance");
    app.add_option("--probes", probes, "derivation-check probe count");
  }

  ScenarioConfig resolve() const {
    ScenarioConfig config;
    if (!config_path.empty()) {
      config = localderiv::config_from_json(load_json_file(config_path));
    } else {
      if (dims.empty())
        throw ConfigError("need --config or --dims to describe the algebra");
      config.shape.points = 1;
    }
    if (!dims.empty()) config.shape.dims = parse_dims(dims);
    if (points) config.shape.points = *points;
    if (!generator.empty()) localderiv::parse_generator_name(generator, config);
    if (seed) config.seed = *seed;
    if (tol) {
      config.tolerances.reconstruct = *tol;
      config.tolerances.verify = *tol;
    }
    if (rank_tol) config.tolerances.rank = *rank_tol;
    if (probes) config.probe_count = *probes;
    config.validate();
    return config;
  }
};

int cmd_run(const ScenarioFlags& flags, const std::string& out_path) {
  const ScenarioConfig config = flags.resolve();
  const localderiv::ScenarioOutcome outcome = localderiv::run_scenario(config);
  write_output(outcome.report, out_path);
  std::cerr << "scenario " << localderiv::to_string(config.generator)
            << " seed " << config.seed << ": expected " << outcome.expected
            << ", " << (outcome.as_expected ? "as expected" : "UNEXPECTED")
            << "\n";
  return outcome.as_expected ? 0 : 1;
}

int cmd_fuzz(const ScenarioFlags& flags, std::size_t trials,
             std::uint64_t base_seed, const std::string& out_path) {
  std::vector<ScenarioConfig> templates;
  if (!flags.config_path.empty()) {
    const json doc = load_json_file(flags.config_path);
    if (doc.contains("templates")) {
      for (const auto& t : doc.at("templates"))
        templates.push_back(localderiv::config_from_json(t));
    } else {
      templates.push_back(localderiv::config_from_json(doc));
    }
  } else {
    templates.push_back(flags.resolve());
  }
  const localderiv::FuzzOutcome outcome =
      localderiv::fuzz(templates, trials, base_seed);
  write_output(outcome.summary, out_path);
  std::cerr << "fuzz: " << templates.size() << " template(s) x " << trials
            << " trial(s), " << (outcome.all_ok ? "all as expected" : "UNEXPECTED results")
            << "\n";
  return outcome.all_ok ? 0 : 1;
}

int cmd_show(const std::string& path) {
  const json doc = load_json_file(path);
  localderiv::BlockMatrix m;
  try {
    m = localderiv::matrix_from_json(doc);
  } catch (const localderiv::ShapeError& e) {
    throw ConfigError(e.what());
  }
  const auto& shape = m.shape();
  std::cout << "algebra " << shape.describe() << "\n";
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t p = 0; p < shape.points; ++p) {
      std::cout << "block " << b << " (" << n << "x" << n << "), point " << p
                << ":\n";
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const localderiv::Complex v = m.block(b).at(i, j, p);
          std::ostringstream cell;
          cell.precision(6);
          cell << v.real() << (v.imag() < 0 ? "-" : "+")
               << std::abs(v.imag()) << "i";
          std::cout << "  " << cell.str();
        }
        std::cout << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-local derivation reconstruction toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a single scenario");
  ScenarioFlags run_flags;
  run_flags.add_to(*run);
  std::string run_out;
  run->add_option("--out", run_out, "write the report to this file");

  auto* fz = app.add_subcommand("fuzz", "run seeded trials over templates");
  ScenarioFlags fuzz_flags;
  fuzz_flags.add_to(*fz);
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  std::string fuzz_out;
  fz->add_option("--trials", trials, "trials per template");
  fz->add_option("--base-seed", base_seed, "first trial seed");
  fz->add_option("--out", fuzz_out, "write the summary to this file");

  auto* show = app.add_subcommand("show", "pretty-print a matrix JSON file");
  std::string show_path;
  show->add_option("file", show_path, "matrix JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags, run_out);
    if (fz->parsed()) return cmd_fuzz(fuzz_flags, trials, base_seed, fuzz_out);
    if (show->parsed()) return cmd_show(show_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
