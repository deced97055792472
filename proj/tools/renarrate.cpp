// renarrate: ingest snapshots, store renarrations, serve the annotation
// protocol and compose audience-specific renditions.
//
// Exit codes: 0 success, 1 validation, 2 I/O, 3 not found, 4 conflict.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <pthread.h>
#include <thread>

#include "renarrate/annotation_store.hpp"
#include "renarrate/composer.hpp"
#include "renarrate/config.hpp"
#include "renarrate/error.hpp"
#include "renarrate/http_service.hpp"
#include "renarrate/provenance.hpp"
#include "renarrate/snapshot_store.hpp"
#include "renarrate/text_util.hpp"

namespace {

using namespace renarrate;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kNotFound = 3, kConflict = 4 };

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::FetchFailed:
    case Errc::IoError:
    case Errc::PortInUse:
    case Errc::StoreCorrupt:
      return kIo;
    case Errc::NotFound:
    case Errc::NoSnapshot:
    case Errc::UnknownContainer:
    case Errc::PageOutOfRange:
    case Errc::Orphaned:
      return kNotFound;
    case Errc::VersionConflict:
    case Errc::MissingVersion:
      return kConflict;
    default:
      return kValidation;
  }
}

AnnotationStore open_store(const Config& config) {
  AnnotationStore::Options options;
  options.dir = config.annotations_dir();
  options.base_iri = config.base_iri;
  options.page_size = config.page_size;
  return AnnotationStore(std::move(options));
}

std::vector<std::string> split_languages(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const std::string tag = item.substr(start, comma - start);
      if (!tag.empty()) out.push_back(tag);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

int cmd_serve(const Config& config, const std::string& host) {
  auto store = std::make_unique<AnnotationStore>([&] {
    AnnotationStore::Options options;
    options.dir = config.annotations_dir();
    options.base_iri = config.base_iri;
    options.page_size = config.page_size;
    return options;
  }());
  SnapshotStore snapshots(config.snapshots_dir());
  HttpService service(*store, snapshots);

  // Signals are handled on a dedicated thread so stop() runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = service.bind(host, config.port);
  std::cout << "listening http://" << host << ":" << port << "\n"
            << "store " << config.store_path.string() << "\n"
            << "annotations " << store->size() << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  store.reset();  // closes and syncs the log
  std::cout << "stopped" << std::endl;
  return kOk;
}

int cmd_ingest(const Config& config, const std::string& source, const std::string& source_iri) {
  DocumentSnapshot snapshot;
  if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
    snapshot = snapshot_from_url(source);
  } else {
    snapshot = snapshot_from_file(source, source_iri.empty() ? std::nullopt
                                                             : std::optional<std::string>(source_iri));
  }
  if (!text::is_absolute_iri(snapshot.source)) {
    throw Error(Errc::InvalidConfig, "source IRI '" + snapshot.source + "' is not absolute");
  }
  SnapshotStore snapshots(config.snapshots_dir());
  const std::string id = snapshots.put(snapshot);
  std::cout << "snapshot " << id << "\n"
            << "source " << snapshot.source << "\n"
            << "mediaType " << snapshot.media_type << "\n"
            << "retrievedAt " << snapshot.retrieved_at.to_string() << std::endl;
  return kOk;
}

int cmd_annotate(const Config& config, const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::FetchFailed, "cannot read " + file.string());
  const std::string doc{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  auto store = open_store(config);
  const auto result = store.create(kDefaultContainer, doc);
  std::cout << result.id << std::endl;
  return kOk;
}

struct ComposeArgs {
  std::string target;
  std::vector<std::string> languages;
  std::string medium;
  int level = 0;
  std::string fallback = "identity";
  fs::path out;
};

int cmd_compose(const Config& config, const ComposeArgs& args) {
  AudienceProfile profile;
  profile.languages = split_languages(args.languages);
  if (profile.languages.empty()) throw Error(Errc::EmptyProfile, "--lang lists no languages");
  if (!args.medium.empty()) {
    profile.medium = medium_from_string(args.medium);
    if (!profile.medium) throw Error(Errc::InvalidConfig, "unknown medium " + args.medium);
  }
  if (args.level != 0) profile.literacy_level = args.level;
  const auto fallback = make_fallback(args.fallback);

  SnapshotStore snapshots(config.snapshots_dir());
  const auto snapshot = snapshots.latest(args.target);
  if (!snapshot) throw Error(Errc::NoSnapshot, "no snapshot of " + args.target);

  auto store = open_store(config);
  std::vector<Renarration> candidates;
  for (auto& s : store.search(SearchQuery{args.target, {}, {}, {}})) {
    candidates.push_back(std::move(s.annotation));
  }
  const Rendition rendition = compose(*snapshot, candidates, profile, *fallback);

  const fs::path report_path = fs::path(args.out.string() + ".provenance.json");
  {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    out << rendition.output;
    if (!out) throw Error(Errc::IoError, "cannot write " + args.out.string());
  }
  {
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    out << provenance_report(rendition).dump(2) << "\n";
    if (!out) throw Error(Errc::IoError, "cannot write " + report_path.string());
  }
  std::size_t fallbacks = 0;
  for (const auto& s : rendition.substitutions) fallbacks += s.is_fallback() ? 1 : 0;
  std::cout << "output " << args.out.string() << "\n"
            << "report " << report_path.string() << "\n"
            << "snapshot " << snapshot->id << "\n"
            << "substitutions " << rendition.substitutions.size() - fallbacks << "\n"
            << "fallback " << fallbacks << "\n"
            << "orphaned " << rendition.orphaned.size() << std::endl;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Store renarrations of web documents and compose audience-specific renditions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  Config config;
  std::string store_path = config.store_path.string();
  app.add_option("--store", store_path, "store directory")->envname("RENARRATE_STORE");
  app.add_option("--base-iri", config.base_iri, "IRI prefix for minted annotation ids")
      ->envname("RENARRATE_BASE_IRI");
  app.add_option("--port", config.port, "HTTP port")->envname("RENARRATE_PORT");
  app.add_option("--page-size", config.page_size, "container page size")->envname("RENARRATE_PAGE_SIZE");

  auto* serve = app.add_subcommand("serve", "run the annotation store and composition service");
  std::string host = "127.0.0.1";
  serve->add_option("--host", host, "listen address")->envname("RENARRATE_HOST");

  auto* ingest = app.add_subcommand("ingest", "snapshot a local file or a URL");
  std::string ingest_source;
  std::string ingest_iri;
  ingest->add_option("source", ingest_source, "file path or http(s) URL")->required();
  ingest->add_option("--source-iri", ingest_iri, "IRI the saved file stands for");

  auto* annotate = app.add_subcommand("annotate", "store a JSON-LD renarration");
  std::string annotate_file;
  annotate->add_option("file", annotate_file, "JSON-LD annotation")->required();

  auto* composer = app.add_subcommand("compose", "compose a rendition for an audience profile");
  ComposeArgs compose_args;
  composer->add_option("--target", compose_args.target, "source IRI")->required();
  composer->add_option("--lang", compose_args.languages, "preferred languages, most preferred first")
      ->envname("RENARRATE_LANG")
      ->delimiter(',');
  composer->add_option("--medium", compose_args.medium, "text, audio, video or image")
      ->envname("RENARRATE_MEDIUM");
  composer->add_option("--level", compose_args.level, "literacy level 1-5")
      ->envname("RENARRATE_LEVEL")
      ->check(CLI::Range(1, 5));
  composer->add_option("--fallback", compose_args.fallback, "identity or tagging")
      ->envname("RENARRATE_FALLBACK")
      ->check(CLI::IsMember({"identity", "tagging"}));
  composer->add_option("--out", compose_args.out, "output document path")->required()->envname("RENARRATE_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    config.store_path = store_path;
    config.validate();
    if (*serve) return cmd_serve(config, host);
    if (*ingest) return cmd_ingest(config, ingest_source, ingest_iri);
    if (*annotate) return cmd_annotate(config, annotate_file);
    return cmd_compose(config, compose_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& detail : e.details()) std::cerr << "  " << detail << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
