#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "renarrate/composer.hpp"
#include "renarrate/model.hpp"
#include "renarrate/snapshot.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

std::filesystem::path fixture_path(std::string_view relative);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

inline constexpr std::string_view kBcpSource = "http://mitan.in/bcp/raika";
inline constexpr std::string_view kWrestlerSource =
    "http://chaha.in/vijayanagara-royal-dasara/wrestlers.jpg";

/// The shipped BCP page as a snapshot of kBcpSource.
renarrate::DocumentSnapshot bcp_snapshot();
/// The five shipped BCP renarrations, in file order.
std::vector<std::string> bcp_annotation_files();
/// Visible text of the ten BCP paragraphs, as written in the fixture.
std::vector<std::string> bcp_paragraphs();

using Rng = std::mt19937_64;

/// Lowercase pseudo-word of 2 to 9 letters.
std::string random_word(Rng& rng);
/// `count` words joined by single spaces.
std::string random_sentence(Rng& rng, std::size_t count);

/// Paragraph texts rendered as an HTML page: every paragraph becomes one
/// `<p>` element, so the extracted text is the paragraphs joined by one
/// space.
std::string html_page(const std::vector<std::string>& paragraphs);
renarrate::DocumentSnapshot html_snapshot(std::string source, std::string content);
renarrate::DocumentSnapshot text_snapshot(std::string source, std::string content);

/// A renarrating translation with one textual body.
renarrate::Renarration make_renarration(std::string source, renarrate::Selector selector,
                                        std::string value, std::string language);

/// Renarration with randomized bodies, audience and created time, for
/// selection and search trials. Motivation is renarrating unless
/// `any_motivation` is set.
renarrate::Renarration random_renarration(Rng& rng, std::string source, bool any_motivation = false);
renarrate::AudienceProfile random_profile(Rng& rng);

inline const std::vector<std::string>& language_pool() {
  static const std::vector<std::string> pool{"kn", "kn-IN", "KN", "en", "en-GB", "hi", "fr", "ta"};
  return pool;
}

}  // namespace testing
