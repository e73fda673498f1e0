#pragma once

#include <string>

#include <json.hpp>

#include "speccas/types.hpp"

namespace speccas {

using Json = nlohmann::ordered_json;

// Exchange format: {"dim": n, "rows": [[[re, im], ...], ...]}.
Json matrix_to_json(const CMatrix& M);
CMatrix matrix_from_json(const Json& doc);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& doc);

CMatrix load_matrix(const std::string& path);
void save_matrix(const CMatrix& M, const std::string& path);

}  // namespace speccas
