#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace threshgate {

enum class Errc {
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  DimMismatch,
  DuplicateId,
  InvalidId,
  NonFiniteValue,
  MalformedRow,
  OutOfRange,
  ZeroNorm,
  LengthMismatch,
  DegenerateRange,
  NoIntersection,
  UnknownPositiveClass,
  NoPositives,
  NoNegatives,
  Io,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so callers
// (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace threshgate
