#pragma once

// Reconstruction of the implementing element of a 2-local derivation from
// finitely many probes, and the certificates that either vouch for the
// 2-locality promise or witness its failure.
//
// The pipeline probes the map at off-diagonal matrix units only:
//   * the (j, j) Peirce coefficient of D(e_ij) is the (j, i) entry of the
//     implementing element (read_offdiag), cross-checked against the
//     redundant (i, i) reading;
//   * the (i, j) Peirce coefficient of D(e_ij) is the difference of diagonal
//     entries a_ii - a_jj (read_diag_differences), subject to an
//     antisymmetry + triple-additivity cocycle certificate;
//   * the diagonal is gauge-fixed by pinning the (0, 0) coefficient of every
//     block to zero (implementing elements are unique only modulo center);
//   * verify replays the map against the assembled element on matrix units,
//     the identity, a connecting special element and random probes.
// Direct sums are handled blockwise with a block-preservation certificate.
//
// Failure is certificate-valued: a map that breaks the promise yields
// failing certificates, not exceptions. Only malformed shapes throw.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "localderiv/algebra.hpp"
#include "localderiv/derivation.hpp"

namespace localderiv {

enum class CertKind { Offdiag, Cocycle, Lemma3, Verify, Blockwise };

std::string to_string(CertKind k);

struct Certificate {
  CertKind kind = CertKind::Verify;
  bool pass = false;
  double max_violation = 0.0;
  double tolerance = 0.0;  // effective threshold max_violation is held to
  std::vector<std::string> witnesses;
};

nlohmann::json certificate_to_json(const Certificate& c);

struct ImplementingElement {
  BlockMatrix abar;
  /// Convention fixing the central ambiguity: the (0,0) coefficient of every
  /// block is exactly zero at every point.
  std::string gauge = "e00-zero";
  /// Max verification residual; NaN until verify has run.
  double residual = std::numeric_limits<double>::quiet_NaN();
  /// Map evaluations consumed to produce abar (off-diagonal matrix units).
  std::size_t probes_used = 0;
};

struct ProbeSet {
  BlockMatrix special_x;
  std::vector<BlockMatrix> randoms;
  std::uint64_t seed = 0;
};

ProbeSet make_probe_set(const AlgebraShape& shape, std::size_t randoms,
                        std::uint64_t seed);

/// The connecting element: per block the superdiagonal sum of e_{i,i+1}
/// (zero for 1-dimensional blocks). Its index-pair graph is connected, which
/// is what the diagonal-difference propagation needs.
BlockMatrix probe_x(const AlgebraShape& shape);

// ---------------------------------------------------------------------------
// Cached map values at off-diagonal matrix units. Building the table is the
// only probing needed to produce the implementing element: exactly
// sum_b n_b (n_b - 1) evaluations.
// ---------------------------------------------------------------------------
class UnitValues {
 public:
  UnitValues(const MapFn& map, const AlgebraShape& shape);

  const AlgebraShape& shape() const { return shape_; }
  std::size_t count() const { return values_.size(); }

  /// D(e_ij) of the named block, i != j.
  const BlockMatrix& value(std::size_t block, std::size_t i,
                           std::size_t j) const;

 private:
  AlgebraShape shape_;
  std::vector<std::size_t> offsets_;
  std::vector<BlockMatrix> values_;
};

// ---------------------------------------------------------------------------
// Peirce read-offs
// ---------------------------------------------------------------------------

struct OffdiagReading {
  /// coeff[b].entry(j, i) is the reconstructed (j, i) entry, read from the
  /// (j, j) Peirce coefficient of D(e_ij). Diagonals are unused.
  std::vector<FnMatrix> coeff;
  /// Largest disagreement with the redundant -(i, i) reading.
  double max_cross_check = 0.0;
  std::string worst;
};

OffdiagReading read_offdiag(const UnitValues& table);
OffdiagReading read_offdiag(const MapFn& map, const AlgebraShape& shape);

struct DiagDifferences {
  /// delta[b].entry(i, j) = a_ii - a_jj reading from D(e_ij), i != j.
  std::vector<FnMatrix> delta;
  /// Antisymmetry and triple additivity of the readings; failure is
  /// evidence that no single diagonal exists, i.e. the promise is broken.
  Certificate cocycle;
};

DiagDifferences read_diag_differences(const UnitValues& table, double tol);
DiagDifferences read_diag_differences(const MapFn& map,
                                      const AlgebraShape& shape, double tol);

/// Gauge-fixed assembly: per block, the (0,0) coefficient is zero, the rest
/// of the diagonal is -delta[0][i], off-diagonal entries come straight from
/// the readings. Residual stays NaN until verify runs.
ImplementingElement assemble(const OffdiagReading& offdiag,
                             const DiagDifferences& diag,
                             const AlgebraShape& shape);

/// Replays the map against [abar, .] on special_x, the identity, every
/// matrix unit and the random probes. Passes when the max residual is at
/// most tol * (1 + norm(abar)) * (1 + max probe norm).
Certificate verify(const MapFn& map, const BlockMatrix& abar,
                   const ProbeSet& probes, double tol);

// ---------------------------------------------------------------------------
// Literal pairwise certificate: solve for implementing elements of the pairs
// (e_01, x) and (e_xi_eta, x) and compare diagonal differences
// c_xi_xi - c_eta_eta against b_xi_xi - b_eta_eta entrywise over X.
// ---------------------------------------------------------------------------

struct PairIndex {
  std::size_t block = 0;
  std::size_t xi = 0;
  std::size_t eta = 0;
};

/// All ordered off-diagonal index pairs of every block of dimension >= 2.
std::vector<PairIndex> all_offdiag_pairs(const AlgebraShape& shape);

Certificate lemma3_certificate(const MapFn& map, const AlgebraShape& shape,
                               const std::vector<PairIndex>& pairs, double tol);
Certificate lemma3_certificate(const MapFn& map, const AlgebraShape& shape,
                               double tol);

// ---------------------------------------------------------------------------
// Full blockwise driver
// ---------------------------------------------------------------------------

struct ReconstructOptions {
  double cert_tol = 1e-8;    // offdiag cross-check, cocycle, block leakage
  double verify_tol = 1e-9;  // scaled inside verify
  std::size_t random_probes = 8;
  std::size_t leak_probes = 3;  // random per-block embeds for leak detection
  std::uint64_t seed = 0x1d2f3a4bULL;
};

struct ReconstructionResult {
  ImplementingElement element;
  std::vector<Certificate> certificates;
  /// Total map evaluations (production + verification).
  std::size_t total_evaluations = 0;

  bool all_pass() const;
  const Certificate& certificate(CertKind kind) const;
};

/// Block-preservation check, per-block Peirce pipeline, gauge-fixed
/// reassembly and final verification, in that order.
ReconstructionResult reconstruct(const MapFn& map, const AlgebraShape& shape,
                                 const ReconstructOptions& opts = {});
ReconstructionResult reconstruct(const MapFn& map, const AlgebraShape& shape,
                                 double tol);

/// {"abar": ..., "certificates": [...], "residual": r, "gauge": "e00-zero"}
nlohmann::json result_to_json(const ReconstructionResult& r);

}  // namespace localderiv
