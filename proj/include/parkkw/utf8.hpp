#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace parkkw::utf8 {

// Decodes UTF-8; invalid sequences become U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append(std::string& out, char32_t cp);
bool is_valid(std::string_view s);

// Letter/case helpers cover ASCII, Latin-1 and Latin Extended-A, which is what
// the bundled profiles and stoplist contain. Everything else above U+00FF that
// is not punctuation or whitespace counts as a letter.
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
bool is_upper(char32_t cp);
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

}  // namespace parkkw::utf8
