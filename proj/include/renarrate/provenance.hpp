#pragma once

#include <json.hpp>

#include "renarrate/composer.hpp"

namespace renarrate {

/// Per-substitution location, choice, score, anchoring method and
/// confidence, plus orphan and overlap counts. Keys come out in a fixed
/// order, so `dump()` is byte-stable for equal renditions.
nlohmann::ordered_json provenance_report(const Rendition& rendition);

}  // namespace renarrate
