#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace erysegm {

/// Failure categories raised by the library. The CLI maps these (together
/// with the stage that raised them) onto process exit codes.
enum class ErrorKind {
  // core-imaging
  FileNotFound,
  UnsupportedFormat,
  CorruptStream,
  Io,
  DimensionMismatch,
  EmptyMask,
  // registration
  ImageTooSmall,
  EmptyDescriptorList,
  InsufficientPoints,
  DegenerateConfiguration,
  InsufficientMatches,
  NoConsensus,
  SingularHomography,
  NoValidOverlap,
  AlignmentFailed,
  // masking
  NotSingleChannel,
  UnknownIdFraction,
  UnknownClassName,
  OutOfBounds,
  // erythema
  EmptyDomain,
  // report-cli
  Config,
  AdapterNotFound,
  AdapterNonzeroExit,
  ManifestInvalid,
  OutputMissing,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for the file/codec failures (missing file, bad stream, write error).
bool is_io_kind(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace erysegm
