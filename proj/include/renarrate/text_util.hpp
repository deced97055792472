#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Small string helpers shared across modules: UTF-8 transcoding, IRI and
// language-tag checks, hashing and id minting.
namespace renarrate::text {

bool is_valid_utf8(std::string_view bytes) noexcept;

/// Decodes UTF-8 into code points. Throws Error(MalformedDocument) on
/// invalid input.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

/// Length in bytes of the UTF-8 sequence introduced by `lead`, or 0 when
/// `lead` cannot start a sequence.
int utf8_sequence_length(unsigned char lead) noexcept;

std::string to_lower_ascii(std::string_view s);

/// scheme ":" non-empty remainder, no whitespace or control characters.
bool is_absolute_iri(std::string_view iri) noexcept;

/// Lowercases scheme and host; everything else (path, trailing slash,
/// query, fragment) is kept verbatim.
std::string normalize_iri(std::string_view iri);

/// Structural BCP-47 check: language subtag of 2-8 letters (or a private
/// use / grandfathered prefix) followed by 1-8 alphanumeric subtags.
bool is_well_formed_language_tag(std::string_view tag) noexcept;

/// Lowercased primary subtag ("kn-IN" -> "kn").
std::string primary_subtag(std::string_view tag);

std::string sha256_hex(std::string_view bytes);

/// 128 bits of randomness as 32 lowercase hex digits.
std::string random_hex_id();

std::string html_escape(std::string_view s);

}  // namespace renarrate::text
