#pragma once

// UTF-8 helpers: validation, Unicode-whitespace trimming and word tokenization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oerq::text {

struct DecodedCodePoint {
  char32_t value;
  std::size_t width;
};

// Decodes one code point starting at `pos`. Returns nullopt on malformed input
// (overlong forms, surrogates, truncated sequences and values above U+10FFFF).
inline std::optional<DecodedCodePoint> decode_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return DecodedCodePoint{b0, 1};

  std::size_t width = 0;
  char32_t cp = 0;
  char32_t min_value = 0;
  if ((b0 & 0xE0) == 0xC0) {
    width = 2; cp = b0 & 0x1F; min_value = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    width = 3; cp = b0 & 0x0F; min_value = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    width = 4; cp = b0 & 0x07; min_value = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + width > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < width; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min_value || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  return DecodedCodePoint{cp, width};
}

// Byte offset of the first invalid sequence, or nullopt when `s` is valid UTF-8.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto cp = decode_at(s, pos);
    if (!cp) return pos;
    pos += cp->width;
  }
  return std::nullopt;
}

inline bool is_valid_utf8(std::string_view s) { return !find_invalid_utf8(s).has_value(); }

// Unicode White_Space property.
constexpr bool is_unicode_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

namespace detail {

// Splits `s` into alternating runs; invokes `on_word(begin, end)` for every
// maximal non-whitespace run. Malformed bytes count as non-whitespace.
template <class OnWord>
void for_each_word(std::string_view s, OnWord&& on_word) {
  std::size_t pos = 0;
  std::optional<std::size_t> word_start;
  while (pos < s.size()) {
    const auto cp = decode_at(s, pos);
    const std::size_t width = cp ? cp->width : 1;
    const bool space = cp && is_unicode_space(cp->value);
    if (space) {
      if (word_start) {
        on_word(*word_start, pos);
        word_start.reset();
      }
    } else if (!word_start) {
      word_start = pos;
    }
    pos += width;
  }
  if (word_start) on_word(*word_start, s.size());
}

}  // namespace detail

inline std::string_view trim_view(std::string_view s) {
  std::optional<std::size_t> first;
  std::size_t last = 0;
  detail::for_each_word(s, [&](std::size_t b, std::size_t e) {
    if (!first) first = b;
    last = e;
  });
  if (!first) return {};
  return s.substr(*first, last - *first);
}

inline std::string trim(std::string_view s) { return std::string(trim_view(s)); }

inline std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  detail::for_each_word(s, [&](std::size_t, std::size_t) { ++n; });
  return n;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  detail::for_each_word(s, [&](std::size_t b, std::size_t e) { out.emplace_back(s.substr(b, e - b)); });
  return out;
}

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace oerq::text
