#include "grasslin/report.hpp"

#include <cmath>

#include "grasslin/matrix_io.hpp"

namespace grasslin {

Json json_from_vector(const DenseVector& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(format_complex(v[i]));
  return out;
}

Json json_from_matrix(const DenseMatrix& m) {
  Json out = Json::array();
  for (std::size_t j = 0; j < m.cols(); ++j)
    out.push_back(json_from_vector(m.column(j)));
  return out;
}

DenseVector vector_from_json(const Json& j) {
  DenseVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = parse_complex_token(j[i].get<std::string>());
  return v;
}

DenseMatrix matrix_from_json(const Json& j) {
  std::vector<DenseVector> columns;
  for (const Json& col : j) columns.push_back(vector_from_json(col));
  return DenseMatrix::from_columns(columns);
}

Json json_from_condition(double kappa) {
  if (std::isinf(kappa)) return "infinite";
  return kappa;
}

Json solve_document(const Json& inputs, const GeneralSolution& solution,
                    double classic_cond) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["inputs"] = inputs;
  doc["theta"] = solution.report.theta;
  doc["rank"] = solution.report.rank;
  doc["sensitivity"] = solution.report.sensitivity;
  doc["classic_condition"] = json_from_condition(classic_cond);
  doc["backward_error"] = solution.report.backward_error;
  doc["residual"] = solution.report.residual;
  doc["branch"] = branch_name(solution.report.branch);

  Json body;
  body["dimension"] = solution.dimension();
  if (!solution.is_empty()) {
    body["anchor"] = json_from_vector(solution.affine->anchor);
    body["kernel"] = json_from_matrix(solution.affine->kernel.basis());
  }
  doc["solution"] = body;
  return doc;
}

}  // namespace grasslin
