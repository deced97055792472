#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "renarrate/model.hpp"

namespace renarrate {

inline constexpr std::string_view kDefaultContainer = "renarrations";
inline constexpr std::size_t kDefaultPageSize = 20;

struct StoredAnnotation {
  Renarration annotation;
  std::string canonical;  // canonical JSON-LD text
  std::string version;    // SHA-256 of `canonical`
  std::string container;
};

struct WriteResult {
  std::string id;
  std::string version;
  std::string canonical;
};

struct ContainerPage {
  std::string container;
  std::vector<StoredAnnotation> items;
  std::size_t page_index = 0;
  std::size_t page_size = kDefaultPageSize;
  std::size_t total_count = 0;
  std::optional<std::size_t> next_page;
};

struct SearchQuery {
  std::string target;
  std::optional<std::string> language;
  std::optional<std::string> motivation;
  std::optional<TransformationKind> transformation;
};

/// True when some body language or audience language shares `query`'s
/// primary subtag.
bool matches_language(const Renarration& r, std::string_view query);

/// Durable annotation repository.
///
/// Every write appends one JSON line to `<dir>/annotations.log` and is
/// fsync'ed before the call returns; the by-id, by-container and by-target
/// indexes are rebuilt from the log on construction. A record whose version
/// is not the hash of its document makes the whole log StoreCorrupt.
///
/// Thread-safe: reads take a shared lock, writes an exclusive one, so a
/// compare-version-and-swap on one id admits exactly one winner.
class AnnotationStore {
public:
  struct Options {
    std::filesystem::path dir;
    std::string base_iri = "http://localhost:8080/";
    std::size_t page_size = kDefaultPageSize;
    std::vector<std::string> containers{std::string(kDefaultContainer)};
    std::function<Timestamp()> clock = &Timestamp::now;
  };

  explicit AnnotationStore(Options options);
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Throws InvalidAnnotation (details list every problem) or UnknownContainer.
  WriteResult create(std::string_view container, std::string_view doc);
  WriteResult create(std::string_view container, Renarration r);

  /// Throws NotFound.
  StoredAnnotation get(std::string_view id) const;
  bool contains(std::string_view id) const;

  /// Throws NotFound, InvalidAnnotation or VersionConflict.
  WriteResult update(std::string_view id, std::string_view expected_version, std::string_view doc);

  /// Throws NotFound or VersionConflict.
  void remove(std::string_view id, std::string_view expected_version);

  /// Items ordered by created, then id. Throws UnknownContainer or
  /// PageOutOfRange (any page past the last, except page 0).
  ContainerPage list(std::string_view container, std::size_t page_index) const;

  /// Exact match on the normalized target source plus every supplied
  /// filter; ordered by created, then id.
  std::vector<StoredAnnotation> search(const SearchQuery& query) const;

  std::size_t size() const;
  std::size_t page_size() const noexcept { return options_.page_size; }
  const std::string& base_iri() const noexcept { return options_.base_iri; }
  bool has_container(std::string_view container) const;
  std::string container_iri(std::string_view container) const;
  /// Full IRI of an annotation from its container-local name.
  std::string iri_for(std::string_view container, std::string_view local) const;

private:
  using OrderKey = std::pair<Timestamp, std::string>;

  Renarration parse_checked(std::string_view doc) const;
  WriteResult store_locked(std::string container, Renarration r);
  void index_locked(StoredAnnotation stored);
  void unindex_locked(const StoredAnnotation& stored);
  void append_log(const std::string& line);
  void replay();

  Options options_;
  int log_fd_ = -1;
  mutable std::shared_mutex mutex_;
  std::map<std::string, StoredAnnotation, std::less<>> by_id_;
  std::map<std::string, std::set<OrderKey>, std::less<>> by_container_;
  std::map<std::string, std::set<OrderKey>, std::less<>> by_target_;
};

}  // namespace renarrate
