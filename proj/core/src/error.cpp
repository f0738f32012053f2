#include "erysegm/error.hpp"

namespace erysegm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::FileNotFound: return "file-not-found";
    case ErrorKind::UnsupportedFormat: return "unsupported-format";
    case ErrorKind::CorruptStream: return "corrupt-stream";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::EmptyMask: return "empty-mask";
    case ErrorKind::ImageTooSmall: return "image-too-small";
    case ErrorKind::EmptyDescriptorList: return "empty-descriptor-list";
    case ErrorKind::InsufficientPoints: return "insufficient-points";
    case ErrorKind::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorKind::InsufficientMatches: return "insufficient-matches";
    case ErrorKind::NoConsensus: return "no-consensus";
    case ErrorKind::SingularHomography: return "singular-homography";
    case ErrorKind::NoValidOverlap: return "no-valid-overlap";
    case ErrorKind::AlignmentFailed: return "alignment-failed";
    case ErrorKind::NotSingleChannel: return "not-single-channel";
    case ErrorKind::UnknownIdFraction: return "unknown-id-fraction";
    case ErrorKind::UnknownClassName: return "unknown-class-name";
    case ErrorKind::OutOfBounds: return "out-of-bounds";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::AdapterNotFound: return "adapter-not-found";
    case ErrorKind::AdapterNonzeroExit: return "adapter-nonzero-exit";
    case ErrorKind::ManifestInvalid: return "manifest-invalid";
    case ErrorKind::OutputMissing: return "output-missing";
  }
  return "unknown";
}

bool is_io_kind(ErrorKind kind) noexcept {
  return kind == ErrorKind::FileNotFound || kind == ErrorKind::UnsupportedFormat ||
         kind == ErrorKind::CorruptStream || kind == ErrorKind::Io;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace erysegm
