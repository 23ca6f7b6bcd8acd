#pragma once

#include <stdexcept>
#include <string>

namespace segcx {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kUsage,
  kMissingFile,
  kIoFailure,
  kCorruptPng,
  kDimensionMismatch,
  kDuplicateId,
  kEmptyMask,
  kEmptyRegion,
  kDisconnected,
  kEmptyDomain,
  kEmptyAfterErosion,
  kTooFewObjects,
  kEmptySide,
  kNoRegions,
  kEmptyBackground,
  kBankTooSmall,
  kBankMissing,
  kInvalidSpec,
  kObjectVanished,
  kNoScenes,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace segcx
