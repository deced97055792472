#include <httplib.h>

#include "renarrate/error.hpp"
#include "renarrate/snapshot_store.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

DocumentSnapshot snapshot_from_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::FetchFailed, "not a URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  const auto res = client.Get(path);
  if (!res) throw Error(Errc::FetchFailed, url + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(Errc::FetchFailed, url + ": HTTP " + std::to_string(res->status));

  DocumentSnapshot s;
  s.source = url;
  s.media_type = essence(res->get_header_value("Content-Type"));
  s.content = res->body;
  s.retrieved_at = Timestamp::now();
  if (s.media_type.empty()) {
    const auto detected = detect_media_type(path, s.content);
    if (!detected) throw Error(Errc::UnsupportedMediaType, url + " has no usable media type");
    s.media_type = *detected;
  }
  if (is_textual_media_type(s.media_type) && !text::is_valid_utf8(s.content)) {
    throw Error(Errc::UnsupportedMediaType, url + " is not valid UTF-8");
  }
  return s;
}

}  // namespace renarrate
