#include "blendnet/error.hpp"

namespace blendnet {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnclosedBranch: return "UnclosedBranch";
    case Errc::UnpairedRingClosure: return "UnpairedRingClosure";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::BadToken: return "BadToken";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::EmptyResult: return "EmptyResult";
    case Errc::MissingFile: return "MissingFile";
    case Errc::BadHeader: return "BadHeader";
    case Errc::BadRow: return "BadRow";
    case Errc::TooFewEntries: return "TooFewEntries";
    case Errc::TooFewPairs: return "TooFewPairs";
    case Errc::SingleClassSubset: return "SingleClassSubset";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TapeMismatch: return "TapeMismatch";
    case Errc::BadDims: return "BadDims";
    case Errc::UnknownVariant: return "UnknownVariant";
    case Errc::EmptySet: return "EmptySet";
    case Errc::DivergedLoss: return "DivergedLoss";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::CorruptPayload: return "CorruptPayload";
    case Errc::DomainError: return "DomainError";
    case Errc::MissingField: return "MissingField";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::Empty: return "Empty";
    case Errc::NoRoot: return "NoRoot";
    case Errc::EmptyFeatures: return "EmptyFeatures";
    case Errc::TooManyFeatures: return "TooManyFeatures";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace blendnet
