#include "grasslin/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace grasslin {

namespace {

[[noreturn]] void parse_fail(const std::string& name, std::size_t line,
                             std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError, name + ": line " + std::to_string(line) +
                                         ", column " + std::to_string(column) +
                                         ": " + what);
}

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

// Splits into whitespace-separated tokens, remembering positions; '%' only
// starts a comment in MatrixMarket mode.
std::vector<std::vector<Token>> tokenize(std::istream& in, bool drop_comments) {
  std::vector<std::vector<Token>> lines;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      if (drop_comments && raw[i] == '%') break;
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      tokens.push_back({raw.substr(start, i - start), lineno, start + 1});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

double parse_real(const Token& t, const std::string& name) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end != begin + t.text.size())
    parse_fail(name, t.line, t.column, "bad number '" + t.text + "'");
  return value;
}

std::size_t parse_count(const Token& t, const std::string& name) {
  double v = parse_real(t, name);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    parse_fail(name, t.line, t.column, "bad count '" + t.text + "'");
  return static_cast<std::size_t>(v);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

DenseMatrix parse_matrix_market(const std::vector<Token>& banner,
                                std::istream& in, const std::string& name) {
  if (banner.size() < 5 || lower(banner[1].text) != "matrix")
    parse_fail(name, 1, 1, "unsupported MatrixMarket banner");
  std::string format = lower(banner[2].text);
  std::string field = lower(banner[3].text);
  std::string symmetry = lower(banner[4].text);
  bool complex_field = field == "complex";
  if (field != "real" && field != "integer" && !complex_field)
    parse_fail(name, 1, 1, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric" &&
      symmetry != "hermitian" && symmetry != "skew-symmetric")
    parse_fail(name, 1, 1, "unsupported symmetry '" + symmetry + "'");

  auto lines = tokenize(in, true);
  if (lines.empty()) parse_fail(name, 1, 1, "missing size line");
  std::size_t cursor = 0;
  const auto& size_line = lines[cursor++];

  auto mirror = [&](DenseMatrix& A, std::size_t i, std::size_t j, Scalar v) {
    A(i, j) = v;
    if (i == j || symmetry == "general") return;
    if (symmetry == "symmetric") A(j, i) = v;
    if (symmetry == "hermitian") A(j, i) = std::conj(v);
    if (symmetry == "skew-symmetric") A(j, i) = -v;
  };

  if (format == "array") {
    if (size_line.size() != 2)
      parse_fail(name, size_line[0].line, size_line[0].column,
                 "array size line needs 'rows cols'");
    std::size_t m = parse_count(size_line[0], name);
    std::size_t n = parse_count(size_line[1], name);
    DenseMatrix A(m, n);

    std::vector<Token> flat;
    for (std::size_t l = cursor; l < lines.size(); ++l)
      flat.insert(flat.end(), lines[l].begin(), lines[l].end());
    std::size_t per_entry = complex_field ? 2 : 1;
    bool lower_only = symmetry != "general";
    std::size_t expected = 0;
    for (std::size_t j = 0; j < n; ++j)
      expected += lower_only ? (m - std::min(j, m)) : m;
    if (flat.size() != expected * per_entry) {
      std::size_t l = flat.empty() ? 1 : flat.back().line;
      parse_fail(name, l, 1,
                 "expected " + std::to_string(expected * per_entry) +
                     " values, found " + std::to_string(flat.size()));
    }
    std::size_t at = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t i0 = lower_only ? j : 0;
      for (std::size_t i = i0; i < m; ++i) {
        double re = parse_real(flat[at], name);
        double im = complex_field ? parse_real(flat[at + 1], name) : 0.0;
        at += per_entry;
        mirror(A, i, j, Scalar(re, im));
      }
    }
    return A;
  }

  if (format != "coordinate")
    parse_fail(name, 1, 1, "unsupported format '" + format + "'");
  if (size_line.size() != 3)
    parse_fail(name, size_line[0].line, size_line[0].column,
               "coordinate size line needs 'rows cols nnz'");
  std::size_t m = parse_count(size_line[0], name);
  std::size_t n = parse_count(size_line[1], name);
  std::size_t nnz = parse_count(size_line[2], name);
  DenseMatrix A(m, n);
  if (lines.size() - cursor != nnz)
    parse_fail(name, size_line[0].line, 1,
               "expected " + std::to_string(nnz) + " entries, found " +
                   std::to_string(lines.size() - cursor));
  for (std::size_t l = cursor; l < lines.size(); ++l) {
    const auto& entry = lines[l];
    std::size_t need = complex_field ? 4 : 3;
    if (entry.size() != need)
      parse_fail(name, entry[0].line, entry[0].column, "bad coordinate entry");
    std::size_t i = parse_count(entry[0], name);
    std::size_t j = parse_count(entry[1], name);
    if (i < 1 || i > m || j < 1 || j > n)
      parse_fail(name, entry[0].line, entry[0].column, "index out of range");
    double re = parse_real(entry[2], name);
    double im = complex_field ? parse_real(entry[3], name) : 0.0;
    mirror(A, i - 1, j - 1, Scalar(re, im));
  }
  return A;
}

DenseMatrix parse_plain_grid(const std::vector<std::vector<Token>>& lines,
                             const std::string& name) {
  if (lines.empty()) parse_fail(name, 1, 1, "empty matrix file");
  const std::size_t n = lines.front().size();
  DenseMatrix A(lines.size(), n);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].size() != n)
      throw Error(ErrorCode::InconsistentRowLength,
                  name + ": line " + std::to_string(lines[i][0].line) +
                      ": expected " + std::to_string(n) + " entries, found " +
                      std::to_string(lines[i].size()));
    for (std::size_t j = 0; j < n; ++j) {
      const Token& t = lines[i][j];
      try {
        A(i, j) = parse_complex_token(t.text);
      } catch (const Error&) {
        parse_fail(name, t.line, t.column, "bad entry '" + t.text + "'");
      }
    }
  }
  return A;
}

}  // namespace

Scalar parse_complex_token(const std::string& token) {
  if (token.empty()) throw Error(ErrorCode::ParseError, "empty token");

  auto to_double = [](const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size())
      throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
    return v;
  };

  if (token.back() != 'i' && token.back() != 'I')
    return Scalar(to_double(token), 0.0);

  std::string body = token.substr(0, token.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  for (std::size_t p = body.size(); p-- > 1;) {
    char c = body[p];
    if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      double re = to_double(body.substr(0, p));
      std::string imag_text = body.substr(p);
      if (imag_text == "+" || imag_text == "-")
        throw Error(ErrorCode::ParseError, "missing imaginary magnitude");
      return Scalar(re, to_double(imag_text));
    }
  }
  return Scalar(0.0, to_double(body));  // pure imaginary
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_complex(const Scalar& z) {
  std::string out = format_double(z.real());
  double im = z.imag();
  out += (std::signbit(im) ? "-" : "+");
  out += format_double(std::fabs(im));
  out += "i";
  return out;
}

DenseMatrix parse_matrix_stream(std::istream& in, const std::string& name) {
  std::string first;
  std::streampos start = in.tellg();
  if (!std::getline(in, first))
    parse_fail(name, 1, 1, "empty matrix file");

  if (first.rfind("%%MatrixMarket", 0) == 0 ||
      first.rfind("%%matrixmarket", 0) == 0) {
    std::istringstream banner_stream(first);
    std::vector<Token> banner;
    std::string word;
    std::size_t col = 1;
    while (banner_stream >> word) {
      banner.push_back({word, 1, col});
      col += word.size() + 1;
    }
    return parse_matrix_market(banner, in, name);
  }

  in.clear();
  in.seekg(start);
  return parse_plain_grid(tokenize(in, false), name);
}

DenseMatrix parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  return parse_matrix_stream(in, path);
}

DenseVector parse_vector_file(const std::string& path) {
  DenseMatrix M = parse_matrix_file(path);
  if (M.cols() != 1)
    throw Error(ErrorCode::ParseError,
                path + ": expected an n x 1 matrix, found " +
                    std::to_string(M.rows()) + " x " + std::to_string(M.cols()));
  return M.column(0);
}

void write_matrix_file(const std::string& path, const DenseMatrix& A) {
  bool complex_field = false;
  for (std::size_t j = 0; j < A.cols() && !complex_field; ++j)
    for (std::size_t i = 0; i < A.rows(); ++i)
      if (A(i, j).imag() != 0.0) {
        complex_field = true;
        break;
      }

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, path + ": cannot open for write");
  out << "%%MatrixMarket matrix array "
      << (complex_field ? "complex" : "real") << " general\n";
  out << A.rows() << " " << A.cols() << "\n";
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i) {
      out << format_double(A(i, j).real());
      if (complex_field) out << " " << format_double(A(i, j).imag());
      out << "\n";
    }
}

void write_vector_file(const std::string& path, const DenseVector& v) {
  DenseMatrix M(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) M(i, 0) = v[i];
  write_matrix_file(path, M);
}

}  // namespace grasslin
