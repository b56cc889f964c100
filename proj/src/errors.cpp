#include "mfrag/errors.hpp"

#include <sstream>

namespace mfrag {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::SinglePoint: return "SinglePoint";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DomainError: return "DomainError";
    case Errc::ParameterMismatch: return "ParameterMismatch";
    case Errc::NonTerminating: return "NonTerminating";
    case Errc::SampleCap: return "SampleCap";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Disconnected: return "Disconnected";
    case Errc::BadSpec: return "BadSpec";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

std::string describe_triangle(std::size_t i, std::size_t j, std::size_t k, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "d(" << i << "," << k << ") = " << lhs << " exceeds d(" << i << "," << j << ") + d(" << j
     << "," << k << ") = " << rhs;
  return os.str();
}

}  // namespace

TriangleViolation::TriangleViolation(std::size_t i, std::size_t j, std::size_t k, double lhs,
                                     double rhs)
    : Error(Errc::TriangleViolation, describe_triangle(i, j, k, lhs, rhs)), triple_{i, j, k} {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(Errc::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace mfrag
