#include "renarrate/annotation_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "renarrate/error.hpp"
#include "renarrate/jsonld.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

bool matches_language(const Renarration& r, std::string_view query) {
  const std::string wanted = text::primary_subtag(query);
  for (const auto& b : r.bodies) {
    const auto& lang = body_language(b);
    if (lang && text::primary_subtag(*lang) == wanted) return true;
  }
  if (r.audience) {
    for (const auto& lang : r.audience->languages) {
      if (text::primary_subtag(lang) == wanted) return true;
    }
  }
  return false;
}

namespace {

std::string with_trailing_slash(std::string iri) {
  if (iri.empty() || iri.back() != '/') iri.push_back('/');
  return iri;
}

}  // namespace

AnnotationStore::AnnotationStore(Options options) : options_(std::move(options)) {
  options_.base_iri = with_trailing_slash(options_.base_iri);
  if (options_.page_size == 0) throw Error(Errc::InvalidConfig, "page size must be positive");
  std::error_code ec;
  fs::create_directories(options_.dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + options_.dir.string() + ": " + ec.message());
  for (const auto& c : options_.containers) by_container_[c];
  replay();
  const fs::path log = options_.dir / "annotations.log";
  log_fd_ = ::open(log.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw Error(Errc::IoError, "cannot open " + log.string() + ": " + std::strerror(errno));
}

AnnotationStore::~AnnotationStore() {
  if (log_fd_ >= 0) {
    ::fsync(log_fd_);
    ::close(log_fd_);
  }
}

void AnnotationStore::replay() {
  const fs::path log = options_.dir / "annotations.log";
  std::ifstream in(log, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto corrupt = [&](const std::string& why) {
      return Error(Errc::StoreCorrupt, log.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw corrupt(e.what());
    }
    if (!record.is_object() || !record.contains("op") || !record.contains("id") ||
        !record["op"].is_string() || !record["id"].is_string()) {
      throw corrupt("record lacks op or id");
    }
    const std::string op = record["op"].get<std::string>();
    const std::string id = record["id"].get<std::string>();
    if (op == "delete") {
      const auto it = by_id_.find(id);
      if (it == by_id_.end()) throw corrupt("delete of unknown id " + id);
      const StoredAnnotation old = it->second;
      unindex_locked(old);
      continue;
    }
    if (op != "put") throw corrupt("unknown op " + op);
    StoredAnnotation stored;
    try {
      stored.canonical = record.at("doc").get<std::string>();
      stored.version = record.at("version").get<std::string>();
      stored.container = record.at("container").get<std::string>();
    } catch (const json::exception& e) {
      throw corrupt(e.what());
    }
    if (text::sha256_hex(stored.canonical) != stored.version) throw corrupt("version does not match document hash");
    try {
      stored.annotation = jsonld::parse_annotation(stored.canonical);
    } catch (const Error& e) {
      throw corrupt(e.what());
    }
    if (!stored.annotation.id || *stored.annotation.id != id || !stored.annotation.created) {
      throw corrupt("stored document lacks its id or created timestamp");
    }
    by_container_[stored.container];
    if (const auto it = by_id_.find(id); it != by_id_.end()) {
      const StoredAnnotation old = it->second;
      unindex_locked(old);
    }
    index_locked(std::move(stored));
  }
}

void AnnotationStore::append_log(const std::string& line) {
  std::string data = line;
  data.push_back('\n');
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(log_fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::IoError, std::string("log write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(log_fd_) != 0) throw Error(Errc::IoError, std::string("fsync failed: ") + std::strerror(errno));
}

void AnnotationStore::index_locked(StoredAnnotation stored) {
  const OrderKey key{*stored.annotation.created, *stored.annotation.id};
  by_container_[stored.container].insert(key);
  by_target_[text::normalize_iri(stored.annotation.target.source)].insert(key);
  by_id_[*stored.annotation.id] = std::move(stored);
}

void AnnotationStore::unindex_locked(const StoredAnnotation& stored) {
  const OrderKey key{*stored.annotation.created, *stored.annotation.id};
  by_container_[stored.container].erase(key);
  const auto target = by_target_.find(text::normalize_iri(stored.annotation.target.source));
  if (target != by_target_.end()) {
    target->second.erase(key);
    if (target->second.empty()) by_target_.erase(target);
  }
  by_id_.erase(*stored.annotation.id);
}

Renarration AnnotationStore::parse_checked(std::string_view doc) const {
  Renarration r;
  try {
    r = jsonld::parse_annotation(doc);
  } catch (const Error& e) {
    throw Error(Errc::InvalidAnnotation, e.what(), {std::string(e.what())});
  }
  return r;
}

bool AnnotationStore::has_container(std::string_view container) const {
  std::shared_lock lock(mutex_);
  return by_container_.find(container) != by_container_.end();
}

std::string AnnotationStore::container_iri(std::string_view container) const {
  return options_.base_iri + std::string(container) + "/";
}

std::string AnnotationStore::iri_for(std::string_view container, std::string_view local) const {
  return container_iri(container) + std::string(local);
}

WriteResult AnnotationStore::store_locked(std::string container, Renarration r) {
  auto violations = validate(r);
  if (!violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.to_string());
    throw Error(Errc::InvalidAnnotation, details.front(), details);
  }
  StoredAnnotation stored;
  stored.canonical = jsonld::serialize_annotation(r);
  stored.version = text::sha256_hex(stored.canonical);
  stored.container = std::move(container);
  stored.annotation = std::move(r);

  ordered_json record;
  record["op"] = "put";
  record["id"] = *stored.annotation.id;
  record["container"] = stored.container;
  record["version"] = stored.version;
  record["doc"] = stored.canonical;
  append_log(record.dump());

  WriteResult result{*stored.annotation.id, stored.version, stored.canonical};
  index_locked(std::move(stored));
  return result;
}

WriteResult AnnotationStore::create(std::string_view container, std::string_view doc) {
  if (!has_container(container)) throw Error(Errc::UnknownContainer, std::string(container));
  return create(container, parse_checked(doc));
}

WriteResult AnnotationStore::create(std::string_view container, Renarration r) {
  std::unique_lock lock(mutex_);
  if (by_container_.find(container) == by_container_.end()) {
    throw Error(Errc::UnknownContainer, std::string(container));
  }
  std::string id;
  do {
    id = iri_for(container, text::random_hex_id());
  } while (by_id_.count(id) > 0);
  r.id = id;
  if (!r.created) r.created = options_.clock();
  return store_locked(std::string(container), std::move(r));
}

StoredAnnotation AnnotationStore::get(std::string_view id) const {
  std::shared_lock lock(mutex_);
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(Errc::NotFound, std::string(id));
  return it->second;
}

bool AnnotationStore::contains(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return by_id_.find(id) != by_id_.end();
}

WriteResult AnnotationStore::update(std::string_view id, std::string_view expected_version,
                                    std::string_view doc) {
  Renarration r = parse_checked(doc);
  if (r.id && *r.id != id) {
    throw Error(Errc::InvalidAnnotation, "document id does not match " + std::string(id),
                {"id: must equal the annotation being updated"});
  }
  std::unique_lock lock(mutex_);
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(Errc::NotFound, std::string(id));
  const StoredAnnotation old = it->second;
  if (old.version != expected_version) {
    throw Error(Errc::VersionConflict, "expected " + std::string(expected_version) + ", current " + old.version);
  }
  r.id = std::string(id);
  if (!r.created) r.created = old.annotation.created;
  // modified strictly increases so every update yields a new version.
  Timestamp modified = options_.clock();
  if (old.annotation.modified && modified <= *old.annotation.modified) {
    modified = old.annotation.modified->plus(std::chrono::microseconds{1});
  }
  if (modified < *r.created) modified = *r.created;
  r.modified = modified;

  if (const auto violations = validate(r); !violations.empty()) {
    std::vector<std::string> details;
    for (const auto& v : violations) details.push_back(v.to_string());
    throw Error(Errc::InvalidAnnotation, details.front(), details);
  }
  unindex_locked(old);
  try {
    return store_locked(old.container, std::move(r));
  } catch (...) {
    index_locked(old);
    throw;
  }
}

void AnnotationStore::remove(std::string_view id, std::string_view expected_version) {
  std::unique_lock lock(mutex_);
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(Errc::NotFound, std::string(id));
  if (it->second.version != expected_version) {
    throw Error(Errc::VersionConflict,
                "expected " + std::string(expected_version) + ", current " + it->second.version);
  }
  ordered_json record;
  record["op"] = "delete";
  record["id"] = std::string(id);
  append_log(record.dump());
  const StoredAnnotation old = it->second;
  unindex_locked(old);
}

ContainerPage AnnotationStore::list(std::string_view container, std::size_t page_index) const {
  std::shared_lock lock(mutex_);
  const auto it = by_container_.find(container);
  if (it == by_container_.end()) throw Error(Errc::UnknownContainer, std::string(container));
  ContainerPage page;
  page.container = std::string(container);
  page.page_index = page_index;
  page.page_size = options_.page_size;
  page.total_count = it->second.size();
  const std::size_t first = page_index * options_.page_size;
  if (page_index > 0 && first >= page.total_count) {
    throw Error(Errc::PageOutOfRange, "page " + std::to_string(page_index) + " of " +
                                          std::to_string(page.total_count) + " items");
  }
  auto key = it->second.begin();
  std::advance(key, static_cast<std::ptrdiff_t>(std::min(first, page.total_count)));
  for (std::size_t n = 0; n < options_.page_size && key != it->second.end(); ++n, ++key) {
    page.items.push_back(by_id_.find(key->second)->second);
  }
  if (first + options_.page_size < page.total_count) page.next_page = page_index + 1;
  return page;
}

std::vector<StoredAnnotation> AnnotationStore::search(const SearchQuery& query) const {
  std::shared_lock lock(mutex_);
  std::vector<StoredAnnotation> out;
  const auto it = by_target_.find(text::normalize_iri(query.target));
  if (it == by_target_.end()) return out;
  for (const auto& key : it->second) {
    const StoredAnnotation& s = by_id_.find(key.second)->second;
    const Renarration& r = s.annotation;
    if (query.language && !matches_language(r, *query.language)) continue;
    if (query.motivation && (!r.motivation || r.motivation->str() != *query.motivation)) continue;
    if (query.transformation && r.transformation != query.transformation) continue;
    out.push_back(s);
  }
  return out;
}

std::size_t AnnotationStore::size() const {
  std::shared_lock lock(mutex_);
  return by_id_.size();
}

}  // namespace renarrate
