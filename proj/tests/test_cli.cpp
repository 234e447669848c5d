#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "grasslin/case_studies.hpp"
#include "grasslin/cli.hpp"
#include "grasslin/general_solver.hpp"
#include "grasslin/matrix_io.hpp"
#include "grasslin/report.hpp"

using namespace grasslin;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / "grasslin_cli_test") {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("rank command") {
  TempDir dir;
  write_matrix_file(dir.file("I3.mtx"), DenseMatrix::identity(3));
  CliRun r = run({"rank", "--matrix", dir.file("I3.mtx"), "--theta", "0.5"});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("rank 3", 0) == 0);
}

TEST_CASE("kernel command emits the basis") {
  TempDir dir;
  write_matrix_file(dir.file("D.mtx"), DenseMatrix::diagonal({1.0, 1e-9}));
  CliRun r = run({"kernel", "--matrix", dir.file("D.mtx"), "--theta", "1e-4",
                  "--format", "json"});
  CHECK(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["rank"] == 1);
  CHECK(doc["kernel_dimension"] == 1);
  DenseMatrix kernel = matrix_from_json(doc["kernel"]);
  CHECK(std::abs(kernel(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("solve command reproduces the polynomial case study") {
  TempDir dir;
  CaseStudy cs = bezout_case();
  write_matrix_file(dir.file("A.mtx"), cs.A);
  write_vector_file(dir.file("b.vec"), cs.b);

  CliRun r = run({"solve", "--matrix", dir.file("A.mtx"), "--rhs",
                  dir.file("b.vec"), "--theta", "5e-4", "--format", "json"});
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["rank"] == 7);
  CHECK(doc["solution"]["dimension"] == 2);
  double sens = doc["sensitivity"].get<double>();
  CHECK(sens > 16.0);
  CHECK(sens < 22.0);
  CHECK(doc["classic_condition"].get<double>() >= 2.2e6);

  // reported residual is reproducible from the emitted solution vectors
  DenseVector anchor = vector_from_json(doc["solution"]["anchor"]);
  DenseMatrix kernel = matrix_from_json(doc["solution"]["kernel"]);
  double residual = (cs.A * anchor - cs.b).norm();
  for (std::size_t j = 0; j < kernel.cols(); ++j)
    residual = std::max(residual, (cs.A * kernel.column(j)).norm());
  CHECK(std::fabs(residual - doc["residual"].get<double>()) <= 1e-12);
}

TEST_CASE("dist command") {
  TempDir dir;
  DenseMatrix D = DenseMatrix::diagonal({1.0, 0.0});
  write_matrix_file(dir.file("A.mtx"), D);
  write_vector_file(dir.file("b.vec"), DenseVector::from_real({1, 0}));
  write_vector_file(dir.file("d.vec"), DenseVector::from_real({2, 0}));
  CliRun r = run({"dist", "--matrix", dir.file("A.mtx"), "--rhs",
                  dir.file("b.vec"), "--matrix2", dir.file("A.mtx"), "--rhs2",
                  dir.file("d.vec"), "--format", "json"});
  REQUIRE(r.status == 0);
  CHECK(Json::parse(r.out)["distance"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("bound window command") {
  TempDir dir;
  write_matrix_file(dir.file("A.mtx"), DenseMatrix::diagonal({1.0, 0.0}));
  CliRun r = run({"bound", "window", "--matrix", dir.file("A.mtx"),
                  "--data-error", "1e-3", "--format", "json"});
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["mu"].get<double>() == doctest::Approx(1e-3));
  CHECK(doc["eta"].get<double>() == doctest::Approx(0.999));
}

TEST_CASE("bound evaluator command") {
  TempDir dir;
  write_matrix_file(dir.file("A.mtx"), DenseMatrix::diagonal({1.0, 0.0}));
  DenseMatrix At = DenseMatrix::diagonal({1.0, 0.1});
  write_matrix_file(dir.file("At.mtx"), At);
  CliRun r = run({"bound", "wedin", "--matrix", dir.file("A.mtx"), "--matrix2",
                  dir.file("At.mtx"), "--rank", "1", "--format", "json"});
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["applicable"] == true);
  CHECK(doc["value"].get<double>() == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("seeded monte-carlo diagnostics are bit reproducible") {
  CliRun a = run({"bound", "mc", "--suite", "wedin_kernel_bound", "--seed",
                  "11", "--trials", "10", "--format", "json"});
  CliRun b = run({"bound", "mc", "--suite", "wedin_kernel_bound", "--seed",
                  "11", "--trials", "10", "--format", "json"});
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  Json doc = Json::parse(a.out);
  CHECK(doc["total_violations"] == 0);

  CliRun c = run({"bound", "mc", "--suite", "wedin_kernel_bound", "--seed",
                  "12", "--trials", "10", "--format", "json"});
  CHECK(c.out != a.out);
}

TEST_CASE("demo division reproduces the published table") {
  CliRun r = run({"demo", "division", "--format", "json"});
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["rank"] == 8);
  double sens = doc["sensitivity"].get<double>();
  CHECK(sens > 1.15);
  CHECK(sens < 1.30);
  const Json& parts = doc["particular_solutions"];
  for (const char* key : {"dense_solve", "tikhonov", "truncated_svd"}) {
    CHECK(parts[key]["nearest_relative_error"].get<double>() <= 8.28e-7);
  }
  CHECK(parts["dense_solve"]["nearest_coefficient"].get<double>() ==
        doctest::Approx(-1.4703701).epsilon(1e-3));
}

TEST_CASE("demo can dump fixture files for the cli to reuse") {
  TempDir dir;
  CliRun r = run({"demo", "bezout", "--dump-dir", dir.file("fixtures")});
  REQUIRE(r.status == 0);
  CliRun solve = run({"solve", "--matrix", dir.file("fixtures/bezout_A.mtx"),
                      "--rhs", dir.file("fixtures/bezout_b.vec"), "--theta",
                      "5e-4", "--format", "json"});
  REQUIRE(solve.status == 0);
  CHECK(Json::parse(solve.out)["rank"] == 7);
}

TEST_CASE("exit statuses are exactly zero, two and three") {
  TempDir dir;
  write_matrix_file(dir.file("A.mtx"), DenseMatrix::diagonal({2.0, 1.0}));
  write_vector_file(dir.file("b.vec"), DenseVector::from_real({1, 1}));

  // usage errors
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"rank", "--matrix", dir.file("A.mtx")}).status == 2);
  CHECK(run({"rank", "--matrix", dir.file("missing.mtx"), "--theta", "0.5"})
            .status == 2);

  // numerical errors carry the error name on stderr
  CliRun guard = run({"rank", "--matrix", dir.file("A.mtx"), "--theta", "1.0"});
  CHECK(guard.status == 3);
  CHECK(guard.err.find("ThetaOnSingularValue") != std::string::npos);

  CliRun ok = run({"solve", "--matrix", dir.file("A.mtx"), "--rhs",
                   dir.file("b.vec"), "--theta", "0.5"});
  CHECK(ok.status == 0);
}

TEST_CASE("guard override through the environment") {
  TempDir dir;
  write_matrix_file(dir.file("A.mtx"), DenseMatrix::diagonal({2.0, 1.0}));

  // theta separated from sigma by 1e-8 passes the default guard but fails a
  // widened one
  CliRun pass = run({"rank", "--matrix", dir.file("A.mtx"), "--theta",
                     "1.00000001"});
  CHECK(pass.status == 0);

  setenv("GRASSLIN_GUARD", "1e-6", 1);
  CliRun reject = run({"rank", "--matrix", dir.file("A.mtx"), "--theta",
                       "1.00000001"});
  unsetenv("GRASSLIN_GUARD");
  CHECK(reject.status == 3);
  CHECK(reject.err.find("ThetaOnSingularValue") != std::string::npos);

  setenv("GRASSLIN_GUARD", "banana", 1);
  CliRun bad = run({"rank", "--matrix", dir.file("A.mtx"), "--theta", "0.5"});
  unsetenv("GRASSLIN_GUARD");
  CHECK(bad.status == 2);
}

TEST_CASE("solve reports bound evaluations when a data error is stated") {
  TempDir dir;
  CaseStudy cs = bezout_case();
  write_matrix_file(dir.file("A.mtx"), cs.A);
  write_vector_file(dir.file("b.vec"), cs.b);
  CliRun r = run({"solve", "--matrix", dir.file("A.mtx"), "--rhs",
                  dir.file("b.vec"), "--theta", "5e-4", "--data-error",
                  "4.5e-4", "--format", "json"});
  REQUIRE(r.status == 0);
  Json doc = Json::parse(r.out);
  REQUIRE(doc.contains("bounds"));
  CHECK(doc["bounds"]["window"]["mu"].get<double>() > 0.0);
  CHECK(doc["bounds"]["general_forward"]["applicable"] == true);
  CHECK(doc["bounds"]["lipschitz_diagnostic"].get<double>() > 1.0);
}
