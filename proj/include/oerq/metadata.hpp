#pragma once

// OER record schema and the canonical "present" / "length" semantics shared by
// the benchmark, scoring, classifier and analysis code.

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oerq/error.hpp"
#include "oerq/text.hpp"

namespace oerq {

// The seven scored metadata fields, in benchmark table order.
enum class ScoredField : std::size_t {
  Title = 0,
  Description,
  Subjects,
  Level,
  Language,
  TimeRequired,
  Accessibilities,
};

inline constexpr std::size_t kScoredFieldCount = 7;

inline constexpr std::array<ScoredField, kScoredFieldCount> kScoredFields = {
    ScoredField::Title,    ScoredField::Description,  ScoredField::Subjects,
    ScoredField::Level,    ScoredField::Language,      ScoredField::TimeRequired,
    ScoredField::Accessibilities,
};

// Fields rated by length distance from the benchmark mean.
inline constexpr std::array<ScoredField, 3> kNumericFields = {
    ScoredField::Title, ScoredField::Description, ScoredField::Subjects};

constexpr std::size_t index_of(ScoredField f) { return static_cast<std::size_t>(f); }

constexpr bool is_numeric_field(ScoredField f) {
  return f == ScoredField::Title || f == ScoredField::Description || f == ScoredField::Subjects;
}

constexpr std::string_view field_name(ScoredField f) {
  constexpr std::array<std::string_view, kScoredFieldCount> names = {
      "title", "description", "subjects", "level", "language", "time_required", "accessibilities"};
  return names[index_of(f)];
}

inline std::optional<ScoredField> field_from_name(std::string_view name) {
  for (auto f : kScoredFields) {
    if (field_name(f) == name) return f;
  }
  return std::nullopt;
}

// Fixed-size map keyed by ScoredField; iteration follows kScoredFields.
template <class T>
struct FieldMap {
  std::array<T, kScoredFieldCount> values{};

  T& operator[](ScoredField f) { return values[index_of(f)]; }
  const T& operator[](ScoredField f) const { return values[index_of(f)]; }

  auto begin() { return values.begin(); }
  auto end() { return values.end(); }
  auto begin() const { return values.begin(); }
  auto end() const { return values.end(); }

  friend bool operator==(const FieldMap&, const FieldMap&) = default;
};

enum class QualityFlag { WithControl, WithoutControl, Unknown };

constexpr std::string_view quality_flag_label(QualityFlag q) {
  switch (q) {
    case QualityFlag::WithControl: return "with control";
    case QualityFlag::WithoutControl: return "without control";
    case QualityFlag::Unknown: break;
  }
  return "unknown";
}

// "with control" / "without control" (case-insensitive, trimmed); anything else is Unknown.
inline QualityFlag parse_quality_flag(std::string_view raw) {
  const auto norm = text::to_lower_ascii(text::trim_view(raw));
  if (norm == "with control") return QualityFlag::WithControl;
  if (norm == "without control") return QualityFlag::WithoutControl;
  return QualityFlag::Unknown;
}

using Date = std::chrono::year_month_day;

struct OerRecord {
  std::string url;
  std::string title;
  std::string description;
  std::string material_type;
  std::optional<Date> date_available;
  std::optional<Date> date_issued;
  std::vector<std::string> subjects;
  std::optional<std::string> level;
  std::vector<std::string> languages;
  std::optional<std::string> time_required;
  std::vector<std::string> accessibilities;
  QualityFlag quality_flag = QualityFlag::Unknown;

  friend bool operator==(const OerRecord&, const OerRecord&) = default;
};

// Trims every text field and list element in place.
inline OerRecord normalized(OerRecord r) {
  for (auto* s : {&r.url, &r.title, &r.description, &r.material_type}) *s = text::trim(*s);
  for (auto* opt : {&r.level, &r.time_required}) {
    if (*opt) **opt = text::trim(**opt);
  }
  for (auto* list : {&r.subjects, &r.languages, &r.accessibilities}) {
    for (auto& item : *list) item = text::trim(item);
  }
  return r;
}

namespace detail {

inline bool any_non_empty(const std::vector<std::string>& items) {
  for (const auto& s : items) {
    if (!text::trim_view(s).empty()) return true;
  }
  return false;
}

inline bool optional_non_empty(const std::optional<std::string>& v) {
  return v.has_value() && !text::trim_view(*v).empty();
}

}  // namespace detail

inline bool field_present(const OerRecord& r, ScoredField f) {
  switch (f) {
    case ScoredField::Title: return !text::trim_view(r.title).empty();
    case ScoredField::Description: return !text::trim_view(r.description).empty();
    case ScoredField::Subjects: return detail::any_non_empty(r.subjects);
    case ScoredField::Level: return detail::optional_non_empty(r.level);
    case ScoredField::Language: return detail::any_non_empty(r.languages);
    case ScoredField::TimeRequired: return detail::optional_non_empty(r.time_required);
    case ScoredField::Accessibilities: return detail::any_non_empty(r.accessibilities);
  }
  return false;
}

// Word tokens for Title/Description, non-empty entries for Subjects.
// Throws ContractViolation for the presence-rated fields.
inline std::size_t field_length(const OerRecord& r, ScoredField f) {
  switch (f) {
    case ScoredField::Title: return text::count_words(r.title);
    case ScoredField::Description: return text::count_words(r.description);
    case ScoredField::Subjects: {
      std::size_t n = 0;
      for (const auto& s : r.subjects) {
        if (!text::trim_view(s).empty()) ++n;
      }
      return n;
    }
    default:
      throw ContractViolation("field_length: '" + std::string(field_name(f)) +
                              "' is presence-rated and has no length");
  }
}

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }

// Accepts YYYY-MM-DD optionally followed by a time part ('T' or ' ' separated).
inline std::optional<Date> parse_iso_date(std::string_view raw) {
  const auto s = text::trim_view(raw);
  if (s.size() < 10) return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = from; i < from + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  int y = 0, m = 0, d = 0;
  if (!digits(0, 4, y) || s[4] != '-' || !digits(5, 2, m) || s[7] != '-' || !digits(8, 2, d)) {
    return std::nullopt;
  }
  if (s.size() > 10 && s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  const auto date = make_date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace oerq
