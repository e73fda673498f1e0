#include "speccas/matrix_io.hpp"

#include <cmath>
#include <fstream>

#include "speccas/error.hpp"

namespace speccas {

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& doc) {
  if (!doc.is_array() || doc.size() != 2 || !doc[0].is_number() || !doc[1].is_number())
    raise(errc::parse_error, "complex values are [re, im] pairs");
  return {doc[0].get<double>(), doc[1].get<double>()};
}

Json matrix_to_json(const CMatrix& M) {
  Json rows = Json::array();
  for (int i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
    rows.push_back(row);
  }
  return Json{{"dim", M.rows()}, {"rows", rows}};
}

CMatrix matrix_from_json(const Json& doc) {
  if (!doc.is_object()) raise(errc::parse_error, "matrix document must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "dim" && key != "rows") raise(errc::parse_error, "unknown matrix field: " + key);
  }
  if (!doc.contains("dim") || !doc.contains("rows"))
    raise(errc::parse_error, "matrix document needs dim and rows");
  int dim = doc["dim"].get<int>();
  if (dim < 1) raise(errc::validation_error, "matrix dimension must be positive");
  const Json& rows = doc["rows"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    raise(errc::parse_error, "rows must list dim rows");

  CMatrix M(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim)
      raise(errc::parse_error, "each row must list dim entries");
    for (int j = 0; j < dim; ++j) {
      M(i, j) = complex_from_json(rows[i][j]);
      if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag()))
        raise(errc::validation_error, "matrix entries must be finite");
    }
  }
  return M;
}

CMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    raise(errc::parse_error, std::string("invalid matrix document: ") + e.what());
  }
  return matrix_from_json(doc);
}

void save_matrix(const CMatrix& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write " + path);
  out << matrix_to_json(M).dump(2) << "\n";
}

}  // namespace speccas
