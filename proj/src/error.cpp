#include "renarrate/error.hpp"

namespace renarrate {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::MissingContext: return "MissingContext";
    case Errc::MissingTarget: return "MissingTarget";
    case Errc::InvalidSelector: return "InvalidSelector";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::MalformedFragment: return "MalformedFragment";
    case Errc::UnsupportedMediaType: return "UnsupportedMediaType";
    case Errc::Ambiguous: return "Ambiguous";
    case Errc::NotFound: return "NotFound";
    case Errc::Orphaned: return "Orphaned";
    case Errc::SourceMismatch: return "SourceMismatch";
    case Errc::InvalidAnnotation: return "InvalidAnnotation";
    case Errc::UnknownContainer: return "UnknownContainer";
    case Errc::VersionConflict: return "VersionConflict";
    case Errc::MissingVersion: return "MissingVersion";
    case Errc::PageOutOfRange: return "PageOutOfRange";
    case Errc::StoreCorrupt: return "StoreCorrupt";
    case Errc::WrongMotivation: return "WrongMotivation";
    case Errc::EmptyProfile: return "EmptyProfile";
    case Errc::NoSnapshot: return "NoSnapshot";
    case Errc::FetchFailed: return "FetchFailed";
    case Errc::PortInUse: return "PortInUse";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string message, std::vector<std::string> details)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      details_(std::move(details)) {}

}  // namespace renarrate
