#include "renarrate/config.hpp"

#include <system_error>

#include "renarrate/error.hpp"
#include "renarrate/text_util.hpp"

namespace renarrate {

void Config::validate() const {
  if (port < 1 || port > 65535) {
    throw Error(Errc::InvalidConfig, "port " + std::to_string(port) + " outside [1, 65535]");
  }
  if (page_size == 0) throw Error(Errc::InvalidConfig, "page size must be positive");
  if (!text::is_absolute_iri(base_iri)) throw Error(Errc::InvalidConfig, "base IRI must be absolute");
  std::error_code ec;
  std::filesystem::create_directories(store_path, ec);
  if (ec || !std::filesystem::is_directory(store_path)) {
    throw Error(Errc::InvalidConfig, "store path " + store_path.string() + " is not writable");
  }
}

}  // namespace renarrate
