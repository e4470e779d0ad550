#include "threshgate/error.hpp"

namespace threshgate {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::InvalidId: return "InvalidId";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ZeroNorm: return "ZeroNorm";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::NoIntersection: return "NoIntersection";
    case Errc::UnknownPositiveClass: return "UnknownPositiveClass";
    case Errc::NoPositives: return "NoPositives";
    case Errc::NoNegatives: return "NoNegatives";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace threshgate
