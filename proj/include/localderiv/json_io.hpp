#pragma once

// JSON wire format for algebra elements:
//   {"points": P, "dims": [n_1, ...],
//    "blocks": [ [ [ [re, im], ... per point ], ... per column ], ... per row ]}
// Field names are fixed; parsers reject any dimension mismatch.

#include <json.hpp>

#include "localderiv/algebra.hpp"

namespace localderiv {

nlohmann::json shape_to_json(const AlgebraShape& shape);
AlgebraShape shape_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const BlockMatrix& m);

/// Throws ShapeError on malformed documents or dimension mismatches.
BlockMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace localderiv
