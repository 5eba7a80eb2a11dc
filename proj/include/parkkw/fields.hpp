#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace parkkw {

// Scoring fields of a parked-domain page, in report order.
enum class Field { Title, Content, MetaKeywords, MetaDescription, Headers, Anchors };

inline constexpr std::size_t kFieldCount = 6;

inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::Title,           Field::Content, Field::MetaKeywords,
    Field::MetaDescription, Field::Headers, Field::Anchors};

template <typename T>
using FieldArray = std::array<T, kFieldCount>;

constexpr std::size_t index_of(Field f) { return static_cast<std::size_t>(f); }

constexpr std::string_view field_name(Field f) {
  switch (f) {
    case Field::Title: return "title";
    case Field::Content: return "content";
    case Field::MetaKeywords: return "meta_keywords";
    case Field::MetaDescription: return "meta_description";
    case Field::Headers: return "headers";
    case Field::Anchors: return "anchors";
  }
  return "";
}

inline std::optional<Field> parse_field(std::string_view name) {
  for (Field f : kAllFields) {
    if (field_name(f) == name) return f;
  }
  return std::nullopt;
}

}  // namespace parkkw
