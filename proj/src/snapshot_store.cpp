#include "renarrate/snapshot_store.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

DocumentSnapshot load(const fs::path& dir) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IoError, "bad snapshot metadata in " + dir.string() + ": " + e.what());
  }
  DocumentSnapshot s;
  s.id = meta.value("id", dir.filename().string());
  s.source = meta.at("source").get<std::string>();
  s.media_type = meta.at("mediaType").get<std::string>();
  const auto ts = Timestamp::parse(meta.at("retrievedAt").get<std::string>());
  if (!ts) throw Error(Errc::IoError, "bad retrievedAt in " + dir.string());
  s.retrieved_at = *ts;
  s.content = read_file(dir / "content");
  return s;
}

}  // namespace

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + root_.string() + ": " + ec.message());
}

fs::path SnapshotStore::source_dir(std::string_view source) const {
  return root_ / text::sha256_hex(text::normalize_iri(source)).substr(0, 32);
}

std::string SnapshotStore::put(DocumentSnapshot snapshot) {
  if (is_textual_media_type(snapshot.media_type) && !text::is_valid_utf8(snapshot.content)) {
    throw Error(Errc::UnsupportedMediaType, snapshot.media_type + " content is not valid UTF-8");
  }
  if (snapshot.id.empty()) snapshot.id = text::random_hex_id();
  const fs::path dir = source_dir(snapshot.source) / snapshot.id;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json meta;
  meta["id"] = snapshot.id;
  meta["source"] = snapshot.source;
  meta["mediaType"] = snapshot.media_type;
  meta["retrievedAt"] = snapshot.retrieved_at.to_string();
  write_file(dir / "content", snapshot.content);
  write_file(dir / "meta.json", meta.dump(2) + "\n");
  return snapshot.id;
}

std::vector<DocumentSnapshot> SnapshotStore::all(std::string_view source) const {
  std::vector<DocumentSnapshot> out;
  const fs::path dir = source_dir(source);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) {
      out.push_back(load(entry.path()));
    }
  }
  std::sort(out.begin(), out.end(), [](const DocumentSnapshot& a, const DocumentSnapshot& b) {
    return a.retrieved_at != b.retrieved_at ? a.retrieved_at < b.retrieved_at : a.id < b.id;
  });
  return out;
}

std::optional<DocumentSnapshot> SnapshotStore::latest(std::string_view source) const {
  auto snapshots = all(source);
  if (snapshots.empty()) return std::nullopt;
  return std::move(snapshots.back());
}

std::optional<std::string> detect_media_type(const fs::path& path, std::string_view content) {
  const std::string ext = text::to_lower_ascii(path.extension().string());
  static const std::pair<const char*, const char*> kByExtension[] = {
      {".html", "text/html"},  {".htm", "text/html"},   {".xhtml", "application/xhtml+xml"},
      {".txt", "text/plain"},  {".text", "text/plain"}, {".md", "text/markdown"},
      {".jpg", "image/jpeg"},  {".jpeg", "image/jpeg"}, {".png", "image/png"},
      {".gif", "image/gif"},   {".webp", "image/webp"}, {".mp3", "audio/mpeg"},
      {".ogg", "audio/ogg"},   {".wav", "audio/wav"},   {".mp4", "video/mp4"},
      {".webm", "video/webm"},
  };
  for (const auto& [e, type] : kByExtension) {
    if (ext == e) return std::string(type);
  }
  if (content.rfind("\xFF\xD8\xFF", 0) == 0) return "image/jpeg";
  if (content.rfind("\x89PNG\r\n\x1A\n", 0) == 0) return "image/png";
  if (content.rfind("GIF87a", 0) == 0 || content.rfind("GIF89a", 0) == 0) return "image/gif";
  if (content.find('\0') != std::string_view::npos || !text::is_valid_utf8(content)) {
    return std::nullopt;
  }
  std::string_view head = content.substr(0, 512);
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front()))) head.remove_prefix(1);
  const std::string lower = text::to_lower_ascii(head.substr(0, 16));
  if (lower.rfind("<!doctype html", 0) == 0 || lower.rfind("<html", 0) == 0) return "text/html";
  return "text/plain";
}

DocumentSnapshot snapshot_from_file(const fs::path& path, std::optional<std::string> source) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(Errc::FetchFailed, "no such file " + path.string());
  std::string content;
  try {
    content = read_file(path);
  } catch (const Error& e) {
    throw Error(Errc::FetchFailed, e.what());
  }
  const auto type = detect_media_type(path, content);
  if (!type) throw Error(Errc::UnsupportedMediaType, "unrecognised content in " + path.string());
  if (is_textual_media_type(*type) && !text::is_valid_utf8(content)) {
    throw Error(Errc::UnsupportedMediaType, path.string() + " is not valid UTF-8");
  }
  DocumentSnapshot s;
  s.source = source ? *source : "file://" + fs::absolute(path).lexically_normal().string();
  s.media_type = *type;
  s.content = std::move(content);
  s.retrieved_at = Timestamp::now();
  return s;
}

}  // namespace renarrate
