#pragma once

#include <memory>
#include <string>

#include "renarrate/annotation_store.hpp"
#include "renarrate/snapshot_store.hpp"

namespace renarrate {

/// HTTP front end for the annotation store and the composer.
///
///   POST   /annotations/                  create (Location + ETag)
///   GET    /annotations/?page=N           container page (AnnotationPage)
///   GET    /annotations/{id}              read (ETag)
///   PUT    /annotations/{id}              replace, If-Match required
///   DELETE /annotations/{id}              delete, If-Match required
///   GET    /search?target=&lang=&motivation=&transformation=
///   GET    /compose?target=&lang=kn,en&medium=&level=&fallback=
///   GET    /reports/{id}                  provenance report of a composition
///   GET    /snapshots/latest?target=      newest snapshot bytes of a source
///
/// Minted annotation IRIs live under `<base>/renarrations/`, which is
/// served as an alias of `/annotations/`. Errors are JSON objects
/// `{"error": code, "detail": text}`.
class HttpService {
public:
  HttpService(AnnotationStore& store, SnapshotStore& snapshots);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Port 0 binds any free port. Returns the bound port; throws
  /// Error(PortInUse) when the address is taken.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void run();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace renarrate
