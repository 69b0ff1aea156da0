#include "error.hpp"

namespace corrgen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotChordal: return "NotChordal";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace corrgen
