#pragma once

#include "dmod/errors.hpp"
#include "dmod/int_matrix.hpp"
#include "dmod/integer.hpp"

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dmod {

// Matrix text format:
//
//   <rows> <cols>
//   <cols integers>      (rows lines)
//
// Lines whose first non-blank character is '#' and blank lines are skipped.

namespace detail {

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_integer_token(std::string_view t) {
  std::size_t i = (t.size() > 1 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (t[i] < '0' || t[i] > '9') return false;
  return true;
}

inline Integer parse_integer(std::string_view t) {
  const bool neg = t[0] == '-';
  if (t[0] == '-' || t[0] == '+') t.remove_prefix(1);
  Integer v{std::string(t)};
  return neg ? Integer(-v) : v;
}

} // namespace detail

/// Parses the text format. Errors report the data row (1-based, header
/// excluded; 0 for the header) and token position.
inline IntMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = detail::split_tokens(text.substr(start, end - start));
    if (!tokens.empty() && tokens[0][0] != '#') lines.push_back(std::move(tokens));
    start = end + 1;
  }
  if (lines.empty()) throw ParseError("empty input: missing '<rows> <cols>' header", 0, 0);

  const auto& head = lines[0];
  if (head.size() != 2)
    throw ParseError("header must be '<rows> <cols>'", 0, head.size() < 2 ? head.size() + 1 : 3);
  std::size_t dims[2];
  for (std::size_t k = 0; k < 2; ++k) {
    if (!detail::is_integer_token(head[k]) || head[k][0] == '-')
      throw ParseError("bad dimension '" + head[k] + "'", 0, k + 1);
    const Integer d = detail::parse_integer(head[k]);
    if (d < 1 || d > 1'000'000) throw ParseError("dimension out of range '" + head[k] + "'", 0, k + 1);
    dims[k] = static_cast<std::size_t>(d);
  }
  const std::size_t m = dims[0], n = dims[1];
  if (lines.size() - 1 < m)
    throw ParseError("expected " + std::to_string(m) + " rows, found " +
                         std::to_string(lines.size() - 1),
                     lines.size(), 0);
  if (lines.size() - 1 > m) throw ParseError("extra rows after matrix", m + 1, 1);

  std::vector<Integer> entries;
  entries.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lines[i + 1];
    for (std::size_t j = 0; j < row.size() && j < n; ++j) {
      if (!detail::is_integer_token(row[j]))
        throw ParseError("non-integer token '" + row[j] + "'", i + 1, j + 1);
      entries.push_back(detail::parse_integer(row[j]));
    }
    if (row.size() != n)
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(n),
                       i + 1, std::min(row.size(), n) + 1);
  }
  return IntMatrix(m, n, std::move(entries));
}

inline std::string emit_matrix(const IntMatrix& a) {
  std::ostringstream os;
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
    os << '\n';
  }
  return os.str();
}

} // namespace dmod
