#pragma once

#include <string>
#include <string_view>

// UTF-8 helpers. All offsets elsewhere in the library count Unicode scalar
// values, so text is decoded to UTF-32 before segmentation.
namespace air::unicode {

/// Decodes UTF-8; each invalid byte becomes U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

/// True when `text` is well-formed UTF-8 (no overlongs or surrogates).
bool is_valid(std::string_view text);

std::size_t length(std::string_view text);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
/// Combining marks continue a word started by a letter or digit.
bool is_mark(char32_t cp);
bool is_apostrophe(char32_t cp);

std::string to_lower(std::string_view text);
/// Simple (length-preserving) case folding used for case-insensitive keys.
std::string fold_case(std::string_view text);

}  // namespace air::unicode
