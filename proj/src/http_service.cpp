#include "renarrate/http_service.hpp"

#include <httplib.h>

#include <charconv>
#include <map>
#include <mutex>
#include <sstream>

#include "renarrate/composer.hpp"
#include "renarrate/error.hpp"
#include "renarrate/jsonld.hpp"
#include "renarrate/provenance.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxReports = 256;
constexpr const char* kAnnotationsPath = "annotations/";

int status_for(Errc code) {
  switch (code) {
    case Errc::InvalidAnnotation:
    case Errc::MalformedDocument:
    case Errc::MissingContext:
    case Errc::MissingTarget:
    case Errc::InvalidSelector:
    case Errc::InvariantViolation:
    case Errc::EmptyProfile:
    case Errc::InvalidConfig:
    case Errc::SourceMismatch:
      return 400;
    case Errc::NotFound:
    case Errc::UnknownContainer:
    case Errc::NoSnapshot:
    case Errc::PageOutOfRange:
      return 404;
    case Errc::VersionConflict:
      return 412;
    case Errc::UnsupportedMediaType:
      return 415;
    case Errc::MissingVersion:
      return 428;
    default:
      return 500;
  }
}

void send_error(httplib::Response& res, Errc code, const std::string& detail,
                const std::vector<std::string>& details = {}) {
  ordered_json body;
  body["error"] = to_string(code);
  body["detail"] = detail;
  if (!details.empty()) body["violations"] = details;
  res.status = status_for(code);
  res.set_content(body.dump(), "application/json");
}

std::string quoted(const std::string& version) { return "\"" + version + "\""; }

// If-Match value without quotes or a weak prefix.
std::string unquote(std::string v) {
  if (v.rfind("W/", 0) == 0) v.erase(0, 2);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  if (v.empty()) return std::nullopt;
  return v;
}

std::size_t parse_index(const std::string& s, const char* what) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(Errc::InvalidConfig, std::string(what) + " must be a non-negative integer");
  }
  return n;
}

}  // namespace

struct HttpService::Impl {
  Impl(AnnotationStore& s, SnapshotStore& snaps) : store(s), snapshots(snaps) { routes(); }

  AnnotationStore& store;
  SnapshotStore& snapshots;
  httplib::Server server;
  std::mutex reports_mutex;
  std::map<std::string, std::string> reports;
  std::vector<std::string> report_order;

  std::string page_iri(std::size_t page) const {
    return store.base_iri() + kAnnotationsPath + "?page=" + std::to_string(page);
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what(), e.details());
      } catch (const std::exception& e) {
        send_error(res, Errc::IoError, e.what());
      }
    };
  }

  void send_annotation(httplib::Response& res, const std::string& canonical, const std::string& version) {
    res.set_header("ETag", quoted(version));
    res.set_header("Link", "<http://www.w3.org/ns/ldp#Resource>; rel=\"type\"");
    res.set_header("Allow", "GET, PUT, DELETE, HEAD, OPTIONS");
    res.set_content(canonical, std::string(kAnnotationMediaType));
  }

  std::string local_to_iri(const std::string& local) const {
    return store.iri_for(kDefaultContainer, local);
  }

  void routes() {
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });

    const auto create = guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto result = store.create(kDefaultContainer, req.body);
      res.status = 201;
      res.set_header("Location", result.id);
      send_annotation(res, result.canonical, result.version);
    });
    server.Post("/annotations/", create);
    server.Post("/annotations", create);

    const auto container = guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::size_t page_index = req.has_param("page") ? parse_index(req.get_param_value("page"), "page") : 0;
      const auto page = store.list(kDefaultContainer, page_index);
      ordered_json doc;
      doc["@context"] = ordered_json::array({kAnnotationContext, "http://www.w3.org/ns/ldp.jsonld"});
      doc["id"] = page_iri(page_index);
      doc["type"] = "AnnotationPage";
      ordered_json part_of;
      part_of["id"] = store.container_iri(kDefaultContainer);
      part_of["type"] = ordered_json::array({"BasicContainer", "AnnotationCollection"});
      part_of["total"] = page.total_count;
      doc["partOf"] = std::move(part_of);
      doc["startIndex"] = page.page_index * page.page_size;
      if (page.next_page) doc["next"] = page_iri(*page.next_page);
      if (page.page_index > 0) doc["prev"] = page_iri(page.page_index - 1);
      ordered_json items = ordered_json::array();
      for (const auto& item : page.items) items.push_back(ordered_json::parse(item.canonical));
      doc["items"] = std::move(items);
      res.set_header("Link", "<http://www.w3.org/ns/ldp#BasicContainer>; rel=\"type\"");
      res.set_content(doc.dump(2), std::string(kAnnotationMediaType));
    });
    server.Get("/annotations/", container);
    server.Get("/annotations", container);

    for (const char* prefix : {"/annotations/", "/renarrations/"}) {
      const std::string pattern = std::string(prefix) + R"(([A-Za-z0-9_\-]+))";
      server.Get(pattern, guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto stored = store.get(local_to_iri(req.matches[1]));
        send_annotation(res, stored.canonical, stored.version);
      }));
      server.Put(pattern, guarded([this](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_header("If-Match")) throw Error(Errc::MissingVersion, "If-Match header required");
        const auto result = store.update(local_to_iri(req.matches[1]),
                                         unquote(req.get_header_value("If-Match")), req.body);
        send_annotation(res, result.canonical, result.version);
      }));
      server.Delete(pattern, guarded([this](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_header("If-Match")) throw Error(Errc::MissingVersion, "If-Match header required");
        store.remove(local_to_iri(req.matches[1]), unquote(req.get_header_value("If-Match")));
        res.status = 204;
      }));
    }

    server.Get("/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
      SearchQuery q;
      const auto target = param(req, "target");
      if (!target || !text::is_absolute_iri(*target)) {
        throw Error(Errc::InvalidAnnotation, "target must be an absolute IRI");
      }
      q.target = *target;
      q.language = param(req, "lang");
      q.motivation = param(req, "motivation");
      if (const auto t = param(req, "transformation")) {
        q.transformation = transformation_from_string(*t);
        if (!q.transformation) throw Error(Errc::InvalidAnnotation, "unknown transformation " + *t);
      }
      const auto hits = store.search(q);
      ordered_json doc;
      doc["@context"] = kAnnotationContext;
      doc["type"] = "AnnotationPage";
      doc["total"] = hits.size();
      ordered_json items = ordered_json::array();
      for (const auto& h : hits) items.push_back(ordered_json::parse(h.canonical));
      doc["items"] = std::move(items);
      res.set_content(doc.dump(2), std::string(kAnnotationMediaType));
    }));

    server.Get("/compose", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto target = param(req, "target");
      if (!target) throw Error(Errc::NoSnapshot, "target is required");
      AudienceProfile profile;
      if (const auto langs = param(req, "lang")) profile.languages = split_list(*langs);
      if (const auto m = param(req, "medium")) {
        profile.medium = medium_from_string(*m);
        if (!profile.medium) throw Error(Errc::InvalidConfig, "unknown medium " + *m);
      }
      if (const auto level = param(req, "level")) {
        profile.literacy_level = static_cast<int>(parse_index(*level, "level"));
      }
      const auto fallback = make_fallback(param(req, "fallback").value_or("identity"));
      const auto snapshot = snapshots.latest(*target);
      if (!snapshot) throw Error(Errc::NoSnapshot, "no snapshot of " + *target);

      std::vector<Renarration> candidates;
      for (auto& s : store.search(SearchQuery{*target, {}, {}, {}})) {
        candidates.push_back(std::move(s.annotation));
      }
      const Rendition rendition = compose(*snapshot, candidates, profile, *fallback);
      const std::string report = provenance_report(rendition).dump(2);
      const std::string report_id = text::sha256_hex(report).substr(0, 32);
      remember_report(report_id, report);

      res.set_header("X-Renarration-Provenance",
                     "<" + store.base_iri() + "reports/" + report_id + ">; rel=\"provenance\"");
      std::string type = snapshot->media_type;
      if (is_textual_media_type(type) && type.find("charset") == std::string::npos) type += "; charset=utf-8";
      res.set_content(rendition.output, type);
    }));

    server.Get(R"(/reports/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(reports_mutex);
      const auto it = reports.find(req.matches[1]);
      if (it == reports.end()) throw Error(Errc::NotFound, "no report " + std::string(req.matches[1]));
      res.set_content(it->second, "application/json");
    }));

    server.Get("/snapshots/latest", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto target = param(req, "target");
      if (!target) throw Error(Errc::NoSnapshot, "target is required");
      const auto snapshot = snapshots.latest(*target);
      if (!snapshot) throw Error(Errc::NoSnapshot, "no snapshot of " + *target);
      res.set_header("X-Snapshot-Id", snapshot->id);
      res.set_header("X-Retrieved-At", snapshot->retrieved_at.to_string());
      res.set_content(snapshot->content, snapshot->media_type);
    }));
  }

  void remember_report(const std::string& id, const std::string& report) {
    std::lock_guard lock(reports_mutex);
    if (reports.emplace(id, report).second) report_order.push_back(id);
    while (report_order.size() > kMaxReports) {
      reports.erase(report_order.front());
      report_order.erase(report_order.begin());
    }
  }
};

HttpService::HttpService(AnnotationStore& store, SnapshotStore& snapshots)
    : impl_(std::make_unique<Impl>(store, snapshots)) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(Errc::PortInUse, "no free port on " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(Errc::PortInUse, host + ":" + std::to_string(port) + " is unavailable");
  }
  return port;
}

void HttpService::run() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace renarrate
