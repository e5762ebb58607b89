#include "pwcs/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace pwcs {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("failed to format double");
  return std::string(buf, ptr);
}

double parse_double(const std::string& token) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r'))
    --last;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("non-numeric token '" + token + "'");
  return value;
}

void store_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# rows=" << m.rows() << " cols=" << m.cols() << "\n";
  std::string line;
  for (Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::string header;
  if (!std::getline(in, header))
    throw ParseError("'" + path.string() + "': empty file");
  Index rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "# rows=%td cols=%td", &rows, &cols) != 2 ||
      rows < 0 || cols < 0)
    throw ParseError("'" + path.string() + "': bad header '" + header + "'");

  Matrix m(rows, cols);
  std::string line, token;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw ParseError("'" + path.string() + "': missing row " +
                       std::to_string(i + 1));
    std::istringstream fields(line);
    Index j = 0;
    while (std::getline(fields, token, ',')) {
      if (j >= cols)
        throw ParseError("'" + path.string() + "': row " + std::to_string(i + 1) +
                         " has more than " + std::to_string(cols) + " fields");
      try {
        m(i, j) = parse_double(token);
      } catch (const ParseError& e) {
        throw ParseError("'" + path.string() + "': row " + std::to_string(i + 1) +
                         ": " + e.what());
      }
      ++j;
    }
    if (j != cols)
      throw ParseError("'" + path.string() + "': row " + std::to_string(i + 1) +
                       " has " + std::to_string(j) + " fields, expected " +
                       std::to_string(cols));
  }
  return m;
}

void store_vector(const Vector& v, const std::filesystem::path& path) {
  store_matrix(v, path);
}

Vector load_vector(const std::filesystem::path& path) {
  Matrix m = load_matrix(path);
  if (m.cols() != 1)
    throw ParseError("'" + path.string() + "': expected a single column, got " +
                     std::to_string(m.cols()));
  return m.col(0);
}

}  // namespace pwcs
