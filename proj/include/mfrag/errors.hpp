#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfrag {

enum class Errc {
  NotSquare,
  NonFinite,
  NotSymmetric,
  NonzeroDiagonal,
  ZeroOffDiagonal,
  TriangleViolation,
  SinglePoint,
  TooFewPoints,
  DomainError,
  ParameterMismatch,
  NonTerminating,
  SampleCap,
  NotNormalized,
  TooLarge,
  Disconnected,
  BadSpec,
  ParseError,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class TriangleViolation : public Error {
 public:
  // dist[i][k] exceeds dist[i][j] + dist[j][k].
  TriangleViolation(std::size_t i, std::size_t j, std::size_t k, double lhs, double rhs);
  std::array<std::size_t, 3> triple() const noexcept { return triple_; }

 private:
  std::array<std::size_t, 3> triple_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mfrag
