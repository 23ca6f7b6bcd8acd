#include "core/error.hpp"

namespace segcx {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kCorruptPng: return "CorruptPng";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kEmptyAfterErosion: return "EmptyAfterErosion";
    case ErrorCode::kTooFewObjects: return "TooFewObjects";
    case ErrorCode::kEmptySide: return "EmptySide";
    case ErrorCode::kNoRegions: return "NoRegions";
    case ErrorCode::kEmptyBackground: return "EmptyBackground";
    case ErrorCode::kBankTooSmall: return "BankTooSmall";
    case ErrorCode::kBankMissing: return "BankMissing";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kObjectVanished: return "ObjectVanished";
    case ErrorCode::kNoScenes: return "NoScenes";
  }
  return "Unknown";
}

}  // namespace segcx
