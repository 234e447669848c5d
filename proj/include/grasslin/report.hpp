#pragma once

#include <json.hpp>

#include "grasslin/general_solver.hpp"

namespace grasslin {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// Complex values serialize as "re+imi" strings with 17 significant digits;
// matrices as arrays of columns.
Json json_from_vector(const DenseVector& v);
Json json_from_matrix(const DenseMatrix& m);
DenseVector vector_from_json(const Json& j);
DenseMatrix matrix_from_json(const Json& j);

// "infinite" marker for a singular classic condition number.
Json json_from_condition(double kappa);

Json solve_document(const Json& inputs, const GeneralSolution& solution,
                    double classic_cond);

}  // namespace grasslin
