#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blendnet {

// Every failure the library reports, one code per condition a caller can
// meaningfully branch on.
enum class Errc {
  // chem
  EmptyInput,
  UnclosedBranch,
  UnpairedRingClosure,
  UnknownElement,
  BadToken,
  WidthMismatch,
  IndexOutOfRange,
  EmptyResult,
  // data
  MissingFile,
  BadHeader,
  BadRow,
  TooFewEntries,
  TooFewPairs,
  SingleClassSubset,
  PoolTooSmall,
  // nn
  ShapeMismatch,
  TapeMismatch,
  // models
  BadDims,
  UnknownVariant,
  EmptySet,
  DivergedLoss,
  BadMagic,
  VersionMismatch,
  CorruptPayload,
  // thermo / stats
  DomainError,
  MissingField,
  LengthMismatch,
  Empty,
  NoRoot,
  // attrib
  EmptyFeatures,
  TooManyFeatures,
  // io
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Parse failure with the character offset into the source text.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& message)
      : Error(code, message + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace blendnet
