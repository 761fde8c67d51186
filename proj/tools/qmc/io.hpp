#pragma once

#include "qmc/core.hpp"

#include <json.hpp>

#include <string>

namespace qmc::io {

using json = nlohmann::json;

// {"rows", "cols", "re", "im"}, row-major
json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j);

json complex_to_json(cplx z);  // [re, im]
cplx complex_from_json(const json& j);

// {"d", "k", "kraus": [matrix, ...]}
json isometry_to_json(const Isometry& iso);
Isometry isometry_from_json(const json& j, double tol = 1e-8);

json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);  // "-" is stdout

}  // namespace qmc::io
