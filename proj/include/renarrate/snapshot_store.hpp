#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "renarrate/snapshot.hpp"

namespace renarrate {

/// Snapshots on disk:
///   <root>/<hash of normalized source>/<snapshot id>/content
///   <root>/<hash of normalized source>/<snapshot id>/meta.json
/// Re-ingesting a source adds another snapshot; nothing is deduplicated.
class SnapshotStore {
public:
  explicit SnapshotStore(std::filesystem::path root);

  /// Persists the snapshot, minting an id when it has none. Textual
  /// snapshots must be valid UTF-8.
  std::string put(DocumentSnapshot snapshot);

  /// Most recently retrieved snapshot of `source` (ties: larger id).
  std::optional<DocumentSnapshot> latest(std::string_view source) const;
  std::vector<DocumentSnapshot> all(std::string_view source) const;

  const std::filesystem::path& root() const noexcept { return root_; }

private:
  std::filesystem::path source_dir(std::string_view source) const;

  std::filesystem::path root_;
};

/// Media type from the file extension, falling back to content sniffing.
/// Returns nullopt for unrecognised binary content.
std::optional<std::string> detect_media_type(const std::filesystem::path& path,
                                             std::string_view content);

/// Reads a local file. `source` defaults to the file's absolute `file://`
/// IRI. Throws Error(FetchFailed) or Error(UnsupportedMediaType).
DocumentSnapshot snapshot_from_file(const std::filesystem::path& path,
                                    std::optional<std::string> source = std::nullopt);

/// One GET, no redirects beyond what the server answers directly, no
/// script execution. Throws Error(FetchFailed) or Error(UnsupportedMediaType).
DocumentSnapshot snapshot_from_url(const std::string& url);

}  // namespace renarrate
