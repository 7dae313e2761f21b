#include "localderiv/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "localderiv/json_io.hpp"
#include "localderiv/rng.hpp"
#include "localderiv/twolocal.hpp"

namespace localderiv {

std::string to_string(CertKind k) {
  switch (k) {
    case CertKind::Offdiag: return "offdiag";
    case CertKind::Cocycle: return "cocycle";
    case CertKind::Lemma3: return "lemma3";
    case CertKind::Verify: return "verify";
    case CertKind::Blockwise: return "blockwise";
  }
  return "unknown";
}

nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.kind);
  j["pass"] = c.pass;
  j["max_violation"] = c.max_violation;
  j["tolerance"] = c.tolerance;
  j["witnesses"] = c.witnesses;
  return j;
}

BlockMatrix probe_x(const AlgebraShape& shape) {
  shape.validate();
  BlockMatrix x(shape);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t p = 0; p < shape.points; ++p)
        x.block(b).at(i, i + 1, p) = Complex{1.0, 0.0};
  }
  return x;
}

ProbeSet make_probe_set(const AlgebraShape& shape, std::size_t randoms,
                        std::uint64_t seed) {
  ProbeSet ps;
  ps.special_x = probe_x(shape);
  ps.seed = seed;
  SplitMix64 rng(seed);
  ps.randoms.reserve(randoms);
  for (std::size_t k = 0; k < randoms; ++k)
    ps.randoms.push_back(random_element(shape, rng));
  return ps;
}

// ---------------------------------------------------------------------------
// UnitValues
// ---------------------------------------------------------------------------

UnitValues::UnitValues(const MapFn& map, const AlgebraShape& shape)
    : shape_(shape) {
  shape_.validate();
  offsets_.reserve(shape_.block_count());
  std::size_t offset = 0;
  for (std::size_t b = 0; b < shape_.block_count(); ++b) {
    offsets_.push_back(offset);
    offset += shape_.dim(b) * (shape_.dim(b) - 1);
  }
  values_.reserve(offset);
  for (std::size_t b = 0; b < shape_.block_count(); ++b) {
    const std::size_t n = shape_.dim(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        values_.push_back(map(matrix_unit(shape_, b, i, j)));
      }
  }
}

const BlockMatrix& UnitValues::value(std::size_t block, std::size_t i,
                                     std::size_t j) const {
  if (block >= shape_.block_count())
    throw ShapeError("unit table: block out of range");
  const std::size_t n = shape_.dim(block);
  if (i >= n || j >= n || i == j)
    throw ShapeError("unit table: need off-diagonal indices in range");
  const std::size_t col = j < i ? j : j - 1;
  return values_[offsets_[block] + i * (n - 1) + col];
}

// ---------------------------------------------------------------------------
// Peirce read-offs
// ---------------------------------------------------------------------------

OffdiagReading read_offdiag(const UnitValues& table) {
  const AlgebraShape& shape = table.shape();
  OffdiagReading out;
  out.coeff.reserve(shape.block_count());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    FnMatrix coeff(n, shape.points);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const BlockMatrix& val = table.value(b, i, j);
        const CFunction primary = peirce(val, b, j, j);     //  a_ji
        const CFunction redundant = peirce(val, b, i, i);   // -a_ji
        coeff.set_entry(j, i, primary);
        const double disc = (primary + redundant).max_abs();
        if (disc > out.max_cross_check) {
          out.max_cross_check = disc;
          std::ostringstream os;
          os << "block " << b << ", probe e_" << i << j;
          out.worst = os.str();
        }
      }
    out.coeff.push_back(std::move(coeff));
  }
  return out;
}

OffdiagReading read_offdiag(const MapFn& map, const AlgebraShape& shape) {
  return read_offdiag(UnitValues(map, shape));
}

DiagDifferences read_diag_differences(const UnitValues& table, double tol) {
  const AlgebraShape& shape = table.shape();
  DiagDifferences out;
  out.delta.reserve(shape.block_count());
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    FnMatrix delta(n, shape.points);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        delta.set_entry(i, j, peirce(table.value(b, i, j), b, i, j));
      }
    out.delta.push_back(std::move(delta));
  }

  Certificate cert;
  cert.kind = CertKind::Cocycle;
  cert.tolerance = tol;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    const FnMatrix& d = out.delta[b];
    for (std::size_t p = 0; p < shape.points; ++p) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double v = std::abs(d.at(i, j, p) + d.at(j, i, p));
          if (v > cert.max_violation) {
            cert.max_violation = v;
            std::ostringstream os;
            os << "antisymmetry at block " << b << ", (" << i << "," << j
               << "), point " << p;
            cert.witnesses = {os.str()};
          }
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          for (std::size_t k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            const double v =
                std::abs(d.at(i, j, p) + d.at(j, k, p) - d.at(i, k, p));
            if (v > cert.max_violation) {
              cert.max_violation = v;
              std::ostringstream os;
              os << "triple at block " << b << ", (" << i << "," << j << ","
                 << k << "), point " << p;
              cert.witnesses = {os.str()};
            }
          }
        }
    }
  }
  cert.pass = cert.max_violation <= tol;
  out.cocycle = std::move(cert);
  return out;
}

DiagDifferences read_diag_differences(const MapFn& map,
                                      const AlgebraShape& shape, double tol) {
  return read_diag_differences(UnitValues(map, shape), tol);
}

ImplementingElement assemble(const OffdiagReading& offdiag,
                             const DiagDifferences& diag,
                             const AlgebraShape& shape) {
  shape.validate();
  if (offdiag.coeff.size() != shape.block_count() ||
      diag.delta.size() != shape.block_count())
    throw ShapeError("assemble: incomplete readings");
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    if (offdiag.coeff[b].dim() != shape.dim(b) ||
        diag.delta[b].dim() != shape.dim(b) ||
        offdiag.coeff[b].points() != shape.points ||
        diag.delta[b].points() != shape.points)
      throw ShapeError("assemble: incomplete readings");

  ImplementingElement element;
  element.abar = zero(shape);
  std::size_t probes = 0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    probes += n * (n - 1);
    FnMatrix& target = element.abar.block(b);
    // Gauge: the (0,0) coefficient stays zero; a_ii = -(a_00 - a_ii).
    for (std::size_t i = 1; i < n; ++i)
      target.set_entry(i, i, Complex{-1.0, 0.0} * diag.delta[b].entry(0, i));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) target.set_entry(r, c, offdiag.coeff[b].entry(r, c));
  }
  element.probes_used = probes;
  return element;
}

Certificate verify(const MapFn& map, const BlockMatrix& abar,
                   const ProbeSet& probes, double tol) {
  const AlgebraShape& shape = abar.shape();
  Certificate cert;
  cert.kind = CertKind::Verify;

  double worst = 0.0;
  double probe_norm = 0.0;
  std::string witness = "none";
  auto consider = [&](const BlockMatrix& p, const std::string& label) {
    probe_norm = std::max(probe_norm, norm(p));
    const double r = distance(map(p), commutator(abar, p));
    if (witness == "none" || r > worst) {
      worst = r;
      witness = label;
    }
  };

  consider(probes.special_x, "special_x");
  consider(identity(shape), "identity");
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::ostringstream os;
        os << "e_" << i << j << " of block " << b;
        consider(matrix_unit(shape, b, i, j), os.str());
      }
  }
  for (std::size_t k = 0; k < probes.randoms.size(); ++k)
    consider(probes.randoms[k], "random " + std::to_string(k));

  cert.max_violation = worst;
  cert.tolerance = tol * (1.0 + norm(abar)) * (1.0 + probe_norm);
  cert.pass = cert.max_violation <= cert.tolerance;
  cert.witnesses = {witness};
  return cert;
}

// ---------------------------------------------------------------------------
// Pairwise diagonal-difference certificate
// ---------------------------------------------------------------------------

std::vector<PairIndex> all_offdiag_pairs(const AlgebraShape& shape) {
  std::vector<PairIndex> pairs;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t xi = 0; xi < n; ++xi)
      for (std::size_t eta = 0; eta < n; ++eta)
        if (xi != eta) pairs.push_back({b, xi, eta});
  }
  return pairs;
}

Certificate lemma3_certificate(const MapFn& map, const AlgebraShape& shape,
                               const std::vector<PairIndex>& pairs,
                               double tol) {
  shape.validate();
  Certificate cert;
  cert.kind = CertKind::Lemma3;
  cert.tolerance = tol;

  std::size_t ref_block = shape.block_count();
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    if (shape.dim(b) >= 2) {
      ref_block = b;
      break;
    }
  if (ref_block == shape.block_count() || pairs.empty()) {
    cert.pass = true;
    cert.witnesses = {"vacuous: no off-diagonal pairs"};
    return cert;
  }

  const BlockMatrix x = probe_x(shape);
  const BlockMatrix dx = map(x);
  const BlockMatrix e_ref = matrix_unit(shape, ref_block, 0, 1);
  const PairSolveResult c =
      implementing_element_for_pair(e_ref, x, map(e_ref), dx, tol);
  if (!c.ok) {
    cert.pass = false;
    cert.max_violation = c.relative_residual;
    std::ostringstream os;
    os << "no common implementing element for reference pair (block "
       << ref_block << ", e_01; x), residual " << c.relative_residual;
    cert.witnesses = {os.str()};
    return cert;
  }

  auto note = [&](double v, const std::string& label) {
    if (v > cert.max_violation) {
      cert.max_violation = v;
      cert.witnesses = {label};
    }
  };

  bool solves_ok = true;
  for (const PairIndex& pr : pairs) {
    if (pr.block >= shape.block_count() || pr.xi == pr.eta ||
        pr.xi >= shape.dim(pr.block) || pr.eta >= shape.dim(pr.block))
      throw ShapeError("lemma3_certificate: bad pair index");
    const BlockMatrix e = matrix_unit(shape, pr.block, pr.xi, pr.eta);
    const PairSolveResult b = implementing_element_for_pair(e, x, map(e), dx, tol);
    std::ostringstream label;
    label << "pair (block " << pr.block << ", e_" << pr.xi << pr.eta << ")";
    if (!b.ok) {
      solves_ok = false;
      note(b.relative_residual,
           "no common implementing element for " + label.str());
      continue;
    }
    const CFunction lhs = peirce(c.element, pr.block, pr.xi, pr.xi) -
                          peirce(c.element, pr.block, pr.eta, pr.eta);
    const CFunction rhs = peirce(b.element, pr.block, pr.xi, pr.xi) -
                          peirce(b.element, pr.block, pr.eta, pr.eta);
    note((lhs - rhs).max_abs(), "diagonal difference mismatch at " + label.str());
  }
  cert.pass = solves_ok && cert.max_violation <= tol;
  if (cert.witnesses.empty()) cert.witnesses = {"all pairs consistent"};
  return cert;
}

Certificate lemma3_certificate(const MapFn& map, const AlgebraShape& shape,
                               double tol) {
  return lemma3_certificate(map, shape, all_offdiag_pairs(shape), tol);
}

// ---------------------------------------------------------------------------
// Blockwise driver
// ---------------------------------------------------------------------------

bool ReconstructionResult::all_pass() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.pass; });
}

const Certificate& ReconstructionResult::certificate(CertKind kind) const {
  for (const auto& c : certificates)
    if (c.kind == kind) return c;
  throw std::out_of_range("no certificate of kind " + to_string(kind));
}

namespace {

double leak_outside_block(const BlockMatrix& value, std::size_t home) {
  BlockMatrix leaked = value;
  const std::size_t n = value.shape().dim(home);
  leaked.block(home) = FnMatrix(n, value.shape().points);
  return norm(leaked);
}

}  // namespace

ReconstructionResult reconstruct(const MapFn& map, const AlgebraShape& shape,
                                 const ReconstructOptions& opts) {
  shape.validate();
  ReconstructionResult result;

  const UnitValues table(map, shape);
  result.total_evaluations += table.count();

  const OffdiagReading offd = read_offdiag(table);
  Certificate offcert;
  offcert.kind = CertKind::Offdiag;
  offcert.max_violation = offd.max_cross_check;
  offcert.tolerance = opts.cert_tol;
  offcert.pass = offd.max_cross_check <= opts.cert_tol;
  offcert.witnesses = {offd.worst.empty() ? "no off-diagonal probes"
                                          : offd.worst};

  const DiagDifferences diag = read_diag_differences(table, opts.cert_tol);
  result.element = assemble(offd, diag, shape);

  // Block preservation: values of probes supported in one block must vanish
  // outside it, and the central partition of unity must reassemble every
  // value. Violations are normalized by (1+|probe|)(1+|value|).
  Certificate blockcert;
  blockcert.kind = CertKind::Blockwise;
  blockcert.tolerance = opts.cert_tol;
  if (shape.block_count() < 2) {
    blockcert.pass = true;
    blockcert.witnesses = {"single block"};
  } else {
    auto consider = [&](const BlockMatrix& probe, const BlockMatrix& value,
                        std::size_t home, const std::string& label) {
      const double scale = (1.0 + norm(probe)) * (1.0 + norm(value));
      const double v = leak_outside_block(value, home) / scale;
      if (v > blockcert.max_violation) {
        blockcert.max_violation = v;
        blockcert.witnesses = {"leak from " + label};
      }
      BlockMatrix partition = zero(shape);
      for (std::size_t j = 0; j < shape.block_count(); ++j)
        partition = partition + multiply(block_unit(shape, j), value);
      const double pv = distance(value, partition) / scale;
      if (pv > blockcert.max_violation) {
        blockcert.max_violation = pv;
        blockcert.witnesses = {"partition of unity at " + label};
      }
    };

    for (std::size_t b = 0; b < shape.block_count(); ++b) {
      const std::size_t n = shape.dim(b);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          std::ostringstream os;
          os << "unit e_" << i << j << " of block " << b;
          consider(matrix_unit(shape, b, i, j), table.value(b, i, j), b,
                   os.str());
        }
    }
    SplitMix64 rng(opts.seed ^ 0xb10cULL);
    for (std::size_t b = 0; b < shape.block_count(); ++b) {
      const BlockMatrix zb = block_unit(shape, b);
      consider(zb, map(zb), b, "central unit z_" + std::to_string(b));
      ++result.total_evaluations;
      for (std::size_t k = 0; k < opts.leak_probes; ++k) {
        const BlockMatrix r = random_element(shape, rng);
        const BlockMatrix probe = embed(shape, b, r.block(b));
        consider(probe, map(probe), b,
                 "random embed " + std::to_string(k) + " in block " +
                     std::to_string(b));
        ++result.total_evaluations;
      }
    }
    blockcert.pass = blockcert.max_violation <= blockcert.tolerance;
  }

  const ProbeSet probes = make_probe_set(shape, opts.random_probes, opts.seed);
  const Certificate vcert = verify(map, result.element.abar, probes,
                                   opts.verify_tol);
  result.total_evaluations += 2 + shape.fiber_dimension() + probes.randoms.size();
  result.element.residual = vcert.max_violation;

  result.certificates = {offcert, diag.cocycle, blockcert, vcert};
  return result;
}

ReconstructionResult reconstruct(const MapFn& map, const AlgebraShape& shape,
                                 double tol) {
  ReconstructOptions opts;
  opts.cert_tol = tol;
  opts.verify_tol = tol;
  return reconstruct(map, shape, opts);
}

nlohmann::json result_to_json(const ReconstructionResult& r) {
  nlohmann::json j;
  j["abar"] = matrix_to_json(r.element.abar);
  j["gauge"] = r.element.gauge;
  j["residual"] = r.element.residual;
  j["probes_used"] = r.element.probes_used;
  j["total_evaluations"] = r.total_evaluations;
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
  j["certificates"] = std::move(certs);
  return j;
}

}  // namespace localderiv
