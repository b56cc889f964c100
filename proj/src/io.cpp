#include "mfrag/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mfrag/errors.hpp"

namespace mfrag {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  // A single terminating newline leaves one empty trailing piece.
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_decimal(const std::string& cell, std::size_t line, std::size_t column) {
  const bool negative = !cell.empty() && cell[0] == '-';
  const std::size_t lead = negative ? 1 : 0;
  if (cell.size() <= lead || !std::isdigit(static_cast<unsigned char>(cell[lead]))) {
    throw ParseError(line, column, "expected a decimal number, got '" + cell + "'");
  }
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, column, "expected a decimal number, got '" + cell + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

FiniteMetricSpace parse_matrix_text(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0].empty()) throw ParseError(1, 1, "missing point count");

  std::size_t n = 0;
  {
    const auto& head = lines[0];
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), n);
    if (ec != std::errc{} || ptr != head.data() + head.size() || n == 0) {
      throw ParseError(1, 1, "first line must be a positive integer, got '" + head + "'");
    }
  }
  if (lines.size() - 1 < n) {
    throw ParseError(lines.size() + 1, 1, "expected " + std::to_string(n) + " rows, found " +
                                              std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > n) throw ParseError(n + 2, 1, "unexpected content after the last row");

  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 2;
    const auto& line = lines[i + 1];
    std::size_t start = 0;
    std::size_t cells = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      const auto cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (cells == n) throw ParseError(line_no, start + 1, "row has more than " + std::to_string(n) + " entries");
      flat.push_back(parse_decimal(cell, line_no, start + 1));
      ++cells;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells != n) {
      throw ParseError(line_no, line.size() + 1,
                       "row has " + std::to_string(cells) + " entries, expected " + std::to_string(n));
    }
  }
  return make_space(n, std::move(flat));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FiniteMetricSpace parse_matrix_file(const std::string& path) { return parse_matrix_text(read_file(path)); }

std::string format_matrix(const FiniteMetricSpace& space) {
  std::string out = std::to_string(space.size()) + "\n";
  for (Point i = 0; i < space.size(); ++i) {
    for (Point j = 0; j < space.size(); ++j) {
      if (j > 0) out += ',';
      out += format_double(space(i, j));
    }
    out += '\n';
  }
  return out;
}

RadiiSchedule parse_schedule_text(const std::string& text) {
  const auto lines = split_lines(text);
  std::vector<double> values;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double v = parse_decimal(lines[i], i + 1, 1);
    if (i == 0 && v != 1.0) throw ParseError(1, 1, "schedule must start with 1");
    if (!(v > 0.0)) throw ParseError(i + 1, 1, "radii must be positive");
    if (i > 0 && !(v < values.back())) throw ParseError(i + 1, 1, "radii must be strictly decreasing");
    values.push_back(v);
  }
  return RadiiSchedule::custom(std::move(values));
}

RadiiSchedule parse_schedule_file(const std::string& path) { return parse_schedule_text(read_file(path)); }

}  // namespace mfrag
