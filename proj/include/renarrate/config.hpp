#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

namespace renarrate {

struct Config {
  std::filesystem::path store_path = "renarrate-store";
  std::string base_iri = "http://localhost:8080/";
  int port = 8080;
  std::size_t page_size = 20;

  /// Throws Error(InvalidConfig): port outside [1, 65535], zero page size,
  /// non-absolute base IRI, or a store path that cannot be created.
  void validate() const;

  std::filesystem::path annotations_dir() const { return store_path / "annotations"; }
  std::filesystem::path snapshots_dir() const { return store_path / "snapshots"; }
};

}  // namespace renarrate
