#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "grasslin/matrix_io.hpp"
#include "grasslin/random.hpp"

using namespace grasslin;

namespace {

DenseMatrix parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_stream(in, "test");
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("matrixmarket array format") {
  DenseMatrix m = parse_text(
      "%%MatrixMarket matrix array real general\n"
      "% identity\n"
      "2 2\n"
      "1\n0\n0\n1\n");
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0).real() == 1.0);
  CHECK(m(1, 0).real() == 0.0);
  CHECK(m(1, 1).real() == 1.0);

  DenseMatrix c = parse_text(
      "%%MatrixMarket matrix array complex general\n"
      "1 2\n"
      "1 2\n"
      "3 -4\n");
  CHECK(c(0, 0) == Scalar(1, 2));
  CHECK(c(0, 1) == Scalar(3, -4));
}

TEST_CASE("matrixmarket coordinate and symmetry") {
  DenseMatrix m = parse_text(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 2\n"
      "2 1 5\n"
      "3 3 7\n");
  CHECK(m(1, 0).real() == 5.0);
  CHECK(m(0, 1).real() == 5.0);
  CHECK(m(2, 2).real() == 7.0);

  DenseMatrix h = parse_text(
      "%%MatrixMarket matrix coordinate complex hermitian\n"
      "2 2 1\n"
      "2 1 1 2\n");
  CHECK(h(1, 0) == Scalar(1, 2));
  CHECK(h(0, 1) == Scalar(1, -2));
}

TEST_CASE("plain grid with complex entries") {
  DenseMatrix m = parse_text("1+2i 0\n0 1\n");
  CHECK(m(0, 0) == Scalar(1, 2));
  CHECK(m(0, 1) == Scalar(0, 0));
  CHECK(m(1, 1) == Scalar(1, 0));

  DenseMatrix e = parse_text("-1.5e-2-2e3i 4\n");
  CHECK(e(0, 0).real() == doctest::Approx(-0.015));
  CHECK(e(0, 0).imag() == doctest::Approx(-2000.0));
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_text("1 2\n3 oops\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    std::string message = e.what();
    CHECK(message.find("line 2") != std::string::npos);
    CHECK(message.find("column 3") != std::string::npos);
  }

  try {
    parse_text("1 2\n3\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentRowLength);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_text(""), Error);
  CHECK_THROWS_AS(parse_matrix_file("/nonexistent/file.mtx"), Error);
}

TEST_CASE("complex token grammar") {
  CHECK(parse_complex_token("3") == Scalar(3, 0));
  CHECK(parse_complex_token("-2.5") == Scalar(-2.5, 0));
  CHECK(parse_complex_token("1+2i") == Scalar(1, 2));
  CHECK(parse_complex_token("1-2i") == Scalar(1, -2));
  CHECK(parse_complex_token("-1e-3+4.5e2i") == Scalar(-1e-3, 450));
  CHECK(parse_complex_token("2i") == Scalar(0, 2));
  CHECK_THROWS_AS(parse_complex_token("1+i2"), Error);
  CHECK_THROWS_AS(parse_complex_token("abc"), Error);
  CHECK_THROWS_AS(parse_complex_token("1+"), Error);
}

TEST_CASE("format and parse round-trip is lossless") {
  Rng rng(601);
  for (int t = 0; t < 200; ++t) {
    Scalar z = rng.complex_gaussian() * Scalar(std::pow(10.0, rng.uniform(-8, 8)), 0);
    Scalar back = parse_complex_token(format_complex(z));
    CHECK(back.real() == z.real());
    CHECK(back.imag() == z.imag());
  }
}

TEST_CASE("matrix file write and parse round-trip") {
  Rng rng(607);
  auto path = temp_file("grasslin_io_roundtrip.mtx");

  DenseMatrix complex_m = rng.matrix(5, 3);
  write_matrix_file(path.string(), complex_m);
  DenseMatrix back = parse_matrix_file(path.string());
  REQUIRE(back.rows() == 5);
  REQUIRE(back.cols() == 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 5; ++i) CHECK(back(i, j) == complex_m(i, j));

  // real matrices write a real field
  DenseMatrix real_m = DenseMatrix::diagonal({1.5, -2.25});
  write_matrix_file(path.string(), real_m);
  std::ifstream check(path);
  std::string banner;
  std::getline(check, banner);
  CHECK(banner.find("real") != std::string::npos);
  DenseMatrix back2 = parse_matrix_file(path.string());
  CHECK(back2(0, 0) == Scalar(1.5, 0));
  CHECK(back2(1, 1) == Scalar(-2.25, 0));

  std::filesystem::remove(path);
}

TEST_CASE("vector files are single-column matrices") {
  auto path = temp_file("grasslin_io_vec.mtx");
  DenseVector v = DenseVector::from_real({1, 2, 3});
  write_vector_file(path.string(), v);
  DenseVector back = parse_vector_file(path.string());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == v[i]);

  write_matrix_file(path.string(), DenseMatrix::identity(2));
  CHECK_THROWS_AS(parse_vector_file(path.string()), Error);
  std::filesystem::remove(path);
}
