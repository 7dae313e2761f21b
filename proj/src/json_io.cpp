#include "localderiv/json_io.hpp"

#include <cmath>

namespace localderiv {

using nlohmann::json;

json shape_to_json(const AlgebraShape& shape) {
  json j;
  j["points"] = shape.points;
  j["dims"] = shape.dims;
  return j;
}

AlgebraShape shape_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dims"))
    throw ShapeError("shape JSON: expected object with 'points' and 'dims'");
  if (!j["points"].is_number_unsigned() && !j["points"].is_number_integer())
    throw ShapeError("shape JSON: 'points' must be a positive integer");
  if (!j["dims"].is_array())
    throw ShapeError("shape JSON: 'dims' must be an array");
  AlgebraShape shape;
  const auto points = j["points"].get<long long>();
  if (points < 1) throw ShapeError("shape JSON: 'points' must be >= 1");
  shape.points = static_cast<std::size_t>(points);
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() && !d.is_number_unsigned())
      throw ShapeError("shape JSON: block dimensions must be integers");
    const auto n = d.get<long long>();
    if (n < 1) throw ShapeError("shape JSON: block dimensions must be >= 1");
    shape.dims.push_back(static_cast<std::size_t>(n));
  }
  shape.validate();
  return shape;
}

json matrix_to_json(const BlockMatrix& m) {
  const auto& shape = m.shape();
  json blocks = json::array();
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json cols = json::array();
      for (std::size_t j = 0; j < n; ++j) {
        json pts = json::array();
        for (std::size_t p = 0; p < shape.points; ++p) {
          const Complex v = m.block(b).at(i, j, p);
          pts.push_back(json::array({v.real(), v.imag()}));
        }
        cols.push_back(std::move(pts));
      }
      rows.push_back(std::move(cols));
    }
    blocks.push_back(std::move(rows));
  }
  json out = shape_to_json(shape);
  out["blocks"] = std::move(blocks);
  return out;
}

BlockMatrix matrix_from_json(const json& j) {
  const AlgebraShape shape = shape_from_json(j);
  if (!j.contains("blocks") || !j["blocks"].is_array())
    throw ShapeError("matrix JSON: missing 'blocks' array");
  const auto& blocks = j["blocks"];
  if (blocks.size() != shape.block_count())
    throw ShapeError("matrix JSON: block count does not match 'dims'");
  BlockMatrix m(shape);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    const auto& rows = blocks[b];
    if (!rows.is_array() || rows.size() != n)
      throw ShapeError("matrix JSON: block " + std::to_string(b) +
                       " must have " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cols = rows[i];
      if (!cols.is_array() || cols.size() != n)
        throw ShapeError("matrix JSON: block " + std::to_string(b) + " row " +
                         std::to_string(i) + " must have " +
                         std::to_string(n) + " columns");
      for (std::size_t c = 0; c < n; ++c) {
        const auto& pts = cols[c];
        if (!pts.is_array() || pts.size() != shape.points)
          throw ShapeError("matrix JSON: entry (" + std::to_string(i) + "," +
                           std::to_string(c) + ") of block " +
                           std::to_string(b) + " must list " +
                           std::to_string(shape.points) + " points");
        for (std::size_t p = 0; p < shape.points; ++p) {
          const auto& pair = pts[p];
          if (!pair.is_array() || pair.size() != 2 ||
              !pair[0].is_number() || !pair[1].is_number())
            throw ShapeError("matrix JSON: values must be [re, im] pairs");
          const double re = pair[0].get<double>();
          const double im = pair[1].get<double>();
          if (!std::isfinite(re) || !std::isfinite(im))
            throw ShapeError("matrix JSON: entries must be finite");
          m.block(b).at(i, c, p) = Complex{re, im};
        }
      }
    }
  }
  return m;
}

}  // namespace localderiv
