#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace renarrate {

enum class Errc {
  MalformedDocument,
  MissingContext,
  MissingTarget,
  InvalidSelector,
  InvariantViolation,
  MalformedFragment,
  UnsupportedMediaType,
  Ambiguous,
  NotFound,
  Orphaned,
  SourceMismatch,
  InvalidAnnotation,
  UnknownContainer,
  VersionConflict,
  MissingVersion,
  PageOutOfRange,
  StoreCorrupt,
  WrongMotivation,
  EmptyProfile,
  NoSnapshot,
  FetchFailed,
  PortInUse,
  InvalidConfig,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library surfaces as this exception. `details` carries
/// field-level messages (validation violations, the wrapped anchoring cause).
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message, std::vector<std::string> details = {});

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

private:
  Errc code_;
  std::vector<std::string> details_;
};

}  // namespace renarrate
