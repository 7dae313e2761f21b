// Acceptance suite. Runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status is nonzero if any
// criterion fails.
//
//   1. reconstruction correctness over the shape grid (honest instances)
//   2. cocycle invariant of the diagonal-difference readings
//   3. pairwise diagonal-difference certificate, honest and noisy witnesses
//   4. negative detection of broken maps, no false alarms on honest maps
//   5. derivation identities of the reconstructed inner derivations
//   6. block structure of direct sums (leakage and partition of unity)
//   7. oracle ambiguity dimension equals the center dimension
//   8. additivity + Jordan at 1e-10 implies Leibniz at 1e-8 on generated maps

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "localderiv/derivation.hpp"
#include "localderiv/oracle.hpp"
#include "localderiv/reconstruct.hpp"
#include "localderiv/rng.hpp"
#include "localderiv/scenario.hpp"
#include "localderiv/twolocal.hpp"

using namespace localderiv;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<AlgebraShape> acceptance_grid() {
  std::vector<AlgebraShape> cells;
  for (std::size_t points : {std::size_t{1}, std::size_t{4}}) {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3},
                          std::size_t{8}, std::size_t{16}})
      cells.push_back(AlgebraShape{points, {n}});
    cells.push_back(AlgebraShape{points, {2, 3}});
    cells.push_back(AlgebraShape{points, {1, 4, 2}});
  }
  return cells;
}

constexpr std::size_t kSeedsPerCell = 20;

std::uint64_t instance_seed(std::size_t cell, std::size_t k) {
  return 7919ULL * (cell + 1) + k;
}

std::size_t max_dim(const AlgebraShape& shape) {
  std::size_t m = 0;
  for (std::size_t n : shape.dims) m = std::max(m, n);
  return m;
}

struct Criterion {
  std::string title;
  bool pass = true;
  std::ostringstream detail;

  void note_failure(const std::string& what) {
    pass = false;
    if (detail.tellp() == 0) detail << "FIRST FAILURE: " << what;
  }
};

struct UnitProbes {
  std::vector<BlockMatrix> probes;
  std::vector<BlockMatrix> values;
};

UnitProbes all_unit_probes(const MapFn& map, const AlgebraShape& shape) {
  UnitProbes out;
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    for (std::size_t i = 0; i < shape.dim(b); ++i)
      for (std::size_t j = 0; j < shape.dim(b); ++j) {
        out.probes.push_back(matrix_unit(shape, b, i, j));
        out.values.push_back(map(out.probes.back()));
      }
  return out;
}

double verify_probe_norm(const AlgebraShape& shape,
                         const ReconstructOptions& opts) {
  const ProbeSet ps = make_probe_set(shape, opts.random_probes, opts.seed);
  double worst = std::max(1.0, norm(probe_x(shape)));
  worst = std::max(worst, norm(identity(shape)));
  for (const auto& r : ps.randoms) worst = std::max(worst, norm(r));
  return worst;
}

}  // namespace

int main() {
  const auto grid = acceptance_grid();
  const auto suite_start = Clock::now();

  Criterion c1{"1. reconstruction correctness over the grid"};
  Criterion c2{"2. cocycle invariant (antisymmetry + triples) <= 1e-10"};
  Criterion c3{"3. pairwise diagonal-difference certificate at 1e-8"};
  Criterion c4{"4. broken maps detected at 1e-6, no honest false alarms"};
  Criterion c5{"5. derivation identities of reconstructed elements"};
  Criterion c6{"6. direct-sum block structure <= 1e-10"};
  Criterion c7{"7. oracle ambiguity equals center dimension (n <= 8)"};
  Criterion c8{"8. additivity + Jordan at 1e-10 imply Leibniz at 1e-8"};

  // --- grid pass: criteria 1, 2, 5, 6, 7 -----------------------------------
  {
    double worst_residual_ratio = 0.0;
    double worst_center_distance = 0.0;
    double worst_cocycle = 0.0;
    double worst_blockwise = 0.0;
    double max_instance_s = 0.0;
    double max_oracle_s = 0.0;
    std::size_t instances = 0;

    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
      const AlgebraShape& shape = grid[cell];
      for (std::size_t k = 0; k < kSeedsPerCell; ++k) {
        const std::uint64_t seed = instance_seed(cell, k);
        SplitMix64 rng(seed);
        const BlockMatrix hidden = random_element(shape, rng);
        const MapFn map = make_honest(hidden).evaluate;
        ++instances;

        const auto t_instance = Clock::now();
        ReconstructOptions opts;
        opts.seed = seed ^ 0xacce97ULL;
        const ReconstructionResult rec = reconstruct(map, shape, opts);

        // Criterion 1: certified reconstruction at the stated bound.
        const double bound = 1e-9 * (1.0 + norm(hidden)) *
                             (1.0 + verify_probe_norm(shape, opts));
        const double ratio =
            bound > 0 ? rec.element.residual / bound : 0.0;
        worst_residual_ratio = std::max(worst_residual_ratio, ratio);
        const CenterComparison hidden_match =
            equal_mod_center(rec.element.abar, hidden, 1e-8);
        worst_center_distance =
            std::max(worst_center_distance, hidden_match.distance);
        if (!rec.all_pass() || rec.element.residual > bound ||
            !hidden_match.pass) {
          std::ostringstream os;
          os << "shape " << shape.describe() << " seed " << seed
             << ": residual " << rec.element.residual << " (bound " << bound
             << "), center distance " << hidden_match.distance;
          c1.note_failure(os.str());
        }

        // Criterion 2: cocycle readings.
        const double cocycle = rec.certificate(CertKind::Cocycle).max_violation;
        worst_cocycle = std::max(worst_cocycle, cocycle);
        if (cocycle > 1e-10)
          c2.note_failure("shape " + shape.describe() + " seed " +
                          std::to_string(seed) + ": cocycle violation " +
                          std::to_string(cocycle));

        // Criterion 6: block leakage and partition of unity on direct sums.
        if (shape.block_count() > 1) {
          const double leak =
              rec.certificate(CertKind::Blockwise).max_violation;
          worst_blockwise = std::max(worst_blockwise, leak);
          if (leak > 1e-10)
            c6.note_failure("shape " + shape.describe() + " seed " +
                            std::to_string(seed) + ": leakage " +
                            std::to_string(leak));
        }

        // Criterion 5: the reconstructed inner derivation satisfies the
        // derivation identities on fresh random probes.
        {
          const MapFn d = inner_derivation(rec.element.abar);
          const auto pairs = make_probe_pairs(shape, 100, seed ^ 0x5151ULL);
          const auto singles = make_probes(shape, 100, seed ^ 0x5252ULL);
          const auto scalars = make_scalars(3, seed ^ 0x5353ULL);
          const double tol_pairs = scaled_tolerance(1e-9, pairs);
          const double tol_singles = scaled_tolerance(1e-9, singles);
          const bool ok =
              check_additive(d, pairs, tol_pairs).pass &&
              check_homogeneous(d, singles, scalars, tol_singles).pass &&
              check_jordan(d, singles, tol_singles).pass &&
              check_leibniz(d, pairs, tol_pairs).pass;
          if (!ok)
            c5.note_failure("shape " + shape.describe() + " seed " +
                            std::to_string(seed));
        }
        max_instance_s = std::max(max_instance_s, seconds_since(t_instance));

        // Criterion 7 plus the oracle comparison of criterion 1.
        const auto t_oracle = Clock::now();
        const UnitProbes units = all_unit_probes(map, shape);
        const GlobalSolveResult oracle =
            solve_global(units.probes, units.values, shape, 1e-8, 1e-10);
        const CenterComparison oracle_match =
            equal_mod_center(rec.element.abar, oracle.element, 1e-8);
        const double oracle_s = seconds_since(t_oracle);
        max_oracle_s = std::max(max_oracle_s, oracle_s);
        if (!oracle.ok || !oracle_match.pass)
          c1.note_failure("shape " + shape.describe() + " seed " +
                          std::to_string(seed) + ": oracle disagreement " +
                          std::to_string(oracle_match.distance));
        if (max_dim(shape) <= 8 &&
            oracle.rank_deficiency != shape.center_dimension()) {
          std::ostringstream os;
          os << "shape " << shape.describe() << " seed " << seed
             << ": rank deficiency " << oracle.rank_deficiency << " expected "
             << shape.center_dimension();
          c7.note_failure(os.str());
        }
        if (seconds_since(t_instance) - oracle_s > 10.0)
          c1.note_failure("shape " + shape.describe() +
                          ": instance exceeded 10 s");
        if (oracle_s > 60.0)
          c1.note_failure("shape " + shape.describe() +
                          ": oracle comparison exceeded 60 s");
      }
    }

    if (c1.pass)
      c1.detail << instances << " instances; worst residual at "
                << worst_residual_ratio
                << " of bound, worst center distance "
                << worst_center_distance << ", max instance "
                << max_instance_s << " s, max oracle comparison "
                << max_oracle_s << " s";
    if (c2.pass) c2.detail << "worst violation " << worst_cocycle;
    if (c5.pass) c5.detail << "4 identities x 100 probes per instance";
    if (c6.pass) c6.detail << "worst normalized leakage " << worst_blockwise;
    if (c7.pass) c7.detail << "rank tolerance 1e-10, all unit probes";
  }

  // --- criterion 3: honest and noisy instances, all pairs ------------------
  {
    double worst = 0.0;
    std::size_t runs = 0;
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
      const AlgebraShape& shape = grid[cell];
      if (max_dim(shape) < 2) continue;
      for (std::size_t k = 0; k < kSeedsPerCell; ++k) {
        for (int noisy = 0; noisy < 2; ++noisy) {
          const std::uint64_t seed =
              instance_seed(cell, k) + (noisy ? 500000ULL : 0ULL);
          SplitMix64 rng(seed);
          const BlockMatrix hidden = random_element(shape, rng);
          const TwoLocalMap m = noisy ? make_noisy_witness(hidden, seed)
                                      : make_honest(hidden);
          const Certificate cert =
              lemma3_certificate(m.evaluate, shape, 1e-8);
          ++runs;
          worst = std::max(worst, cert.max_violation);
          if (!cert.pass)
            c3.note_failure("shape " + shape.describe() + " seed " +
                            std::to_string(seed) +
                            (noisy ? " (noisy)" : " (honest)") + ": " +
                            cert.witnesses.front());
        }
      }
    }
    if (c3.pass)
      c3.detail << runs << " instances, all ordered pairs, worst violation "
                << worst;
  }

  // --- criterion 4: negative detection at 1e-6 -----------------------------
  {
    const AlgebraShape shape{1, {2, 3}};
    const double tol = 1e-6;
    std::size_t detected = 0, false_alarms = 0;
    auto flagged = [&](const MapFn& map) {
      const ReconstructionResult rec = reconstruct(map, shape, tol);
      if (!rec.all_pass()) return true;
      return !lemma3_certificate(map, shape, tol).pass;
    };
    for (const BrokenKind kind : {BrokenKind::Offset,
                                  BrokenKind::ElementDependent,
                                  BrokenKind::Blockmix}) {
      for (std::size_t k = 0; k < 100; ++k) {
        const TwoLocalMap m = make_broken(kind, 31337 + k, shape);
        if (flagged(m.evaluate))
          ++detected;
        else
          c4.note_failure("undetected " + to_string(kind) + " seed " +
                          std::to_string(31337 + k));
      }
    }
    for (std::size_t k = 0; k < 100; ++k) {
      SplitMix64 rng(62000 + k);
      const TwoLocalMap m = make_honest(random_element(shape, rng));
      if (flagged(m.evaluate)) {
        ++false_alarms;
        c4.note_failure("false alarm on honest seed " +
                        std::to_string(62000 + k));
      }
    }
    if (c4.pass)
      c4.detail << detected << "/300 broken flagged, " << false_alarms
                << "/100 honest false alarms";
  }

  // --- criterion 8: additivity + Jordan imply Leibniz ----------------------
  {
    std::size_t qualified = 0, tested = 0;
    const std::vector<AlgebraShape> shapes = {AlgebraShape{1, {3}},
                                              AlgebraShape{2, {2, 3}}};
    for (const AlgebraShape& shape : shapes) {
      std::vector<TwoLocalMap> maps;
      for (std::size_t k = 0; k < 10; ++k) {
        SplitMix64 rng(880 + k);
        const BlockMatrix hidden = random_element(shape, rng);
        maps.push_back(make_honest(hidden));
        maps.push_back(make_noisy_witness(hidden, 880 + k));
        maps.push_back(make_broken(BrokenKind::Offset, 880 + k, shape));
        maps.push_back(
            make_broken(BrokenKind::ElementDependent, 880 + k, shape));
        if (shape.block_count() >= 2)
          maps.push_back(make_broken(BrokenKind::Blockmix, 880 + k, shape));
      }
      std::size_t probe_seed = 0;
      for (const TwoLocalMap& m : maps) {
        ++tested;
        const auto pairs = make_probe_pairs(shape, 40, 9000 + probe_seed);
        const auto singles = make_probes(shape, 40, 9100 + probe_seed);
        ++probe_seed;
        const bool additive = check_additive(m.evaluate, pairs, 1e-10).pass;
        const bool jordan = check_jordan(m.evaluate, singles, 1e-10).pass;
        if (!additive || !jordan) continue;
        ++qualified;
        if (!check_leibniz(m.evaluate, pairs, 1e-8).pass)
          c8.note_failure("map " + to_string(m.provenance) + " on " +
                          shape.describe() +
                          " passes additivity and Jordan but fails Leibniz");
      }
    }
    if (c8.pass)
      c8.detail << qualified << "/" << tested
                << " generated maps qualified; implication held for all";
  }

  // --- report ----------------------------------------------------------------
  const std::vector<const Criterion*> all = {&c1, &c2, &c3, &c4,
                                             &c5, &c6, &c7, &c8};
  bool pass = true;
  for (const Criterion* c : all) {
    pass = pass && c->pass;
    std::printf("[%s] %s (%s)\n", c->pass ? "PASS" : "FAIL",
                c->title.c_str(), c->detail.str().c_str());
  }
  std::printf("acceptance suite %s in %.1f s\n", pass ? "passed" : "FAILED",
              seconds_since(suite_start));
  return pass ? 0 : 1;
}
