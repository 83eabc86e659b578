#include "mdd/error.hpp"

namespace mdd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::OracleRangeExceeded: return "OracleRangeExceeded";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::DegenerateDraw: return "DegenerateDraw";
    case ErrorKind::InvalidQuantile: return "InvalidQuantile";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateSetId: return "DuplicateSetId";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace mdd
