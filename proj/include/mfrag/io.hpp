#pragma once

#include <string>
#include <vector>

#include "mfrag/metric.hpp"
#include "mfrag/radii.hpp"

namespace mfrag {

// Distance-matrix text format: a line holding n, then n lines of n
// comma-separated decimals. No spaces, no trailing commas, '.' as the decimal
// separator; a final newline after the last row is optional.

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// Parses the text form. Format problems raise ParseError with a 1-based line
/// and column; metric problems raise the make_space errors.
FiniteMetricSpace parse_matrix_text(const std::string& text);
FiniteMetricSpace parse_matrix_file(const std::string& path);

std::string format_matrix(const FiniteMetricSpace& space);

/// One decimal per line, first value exactly 1, strictly decreasing.
RadiiSchedule parse_schedule_text(const std::string& text);
RadiiSchedule parse_schedule_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace mfrag
