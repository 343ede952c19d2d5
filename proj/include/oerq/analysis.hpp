#pragma once

// Exploratory statistics: field availability per quality-control group and
// the yearly share of quality-controlled records.

#include <array>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/metadata.hpp"

namespace oerq {

struct GroupAvailability {
  std::optional<double> with_control_rate;     // nullopt when the group is empty
  std::optional<double> without_control_rate;

  friend bool operator==(const GroupAvailability&, const GroupAvailability&) = default;
};

inline FieldMap<GroupAvailability> availability_by_group(const std::vector<OerRecord>& records) {
  std::array<std::size_t, 2> group_size{};
  std::array<FieldMap<std::size_t>, 2> present{};
  for (const auto& r : records) {
    std::size_t g = 0;
    if (r.quality_flag == QualityFlag::WithControl) {
      g = 0;
    } else if (r.quality_flag == QualityFlag::WithoutControl) {
      g = 1;
    } else {
      continue;
    }
    ++group_size[g];
    for (auto f : kScoredFields) {
      if (field_present(r, f)) ++present[g][f];
    }
  }
  auto rate = [&](std::size_t g, ScoredField f) -> std::optional<double> {
    if (group_size[g] == 0) return std::nullopt;
    return static_cast<double>(present[g][f]) / static_cast<double>(group_size[g]);
  };
  FieldMap<GroupAvailability> out;
  for (auto f : kScoredFields) out[f] = {rate(0, f), rate(1, f)};
  return out;
}

struct YearShare {
  std::size_t with_control = 0;
  std::size_t without_control = 0;

  std::size_t total() const { return with_control + without_control; }
  double controlled_fraction() const {
    return total() == 0 ? 0.0 : static_cast<double>(with_control) / static_cast<double>(total());
  }
};

struct YearlyTrend {
  std::map<int, YearShare> years;
  std::size_t excluded_undated = 0;
  std::size_t excluded_unknown_flag = 0;
};

// Year of date_issued, falling back to date_available.
inline std::optional<int> record_year(const OerRecord& r) {
  if (r.date_issued) return year_of(*r.date_issued);
  if (r.date_available) return year_of(*r.date_available);
  return std::nullopt;
}

inline YearlyTrend yearly_control_trend(const std::vector<OerRecord>& records) {
  YearlyTrend t;
  for (const auto& r : records) {
    const auto year = record_year(r);
    if (!year) {
      ++t.excluded_undated;
      continue;
    }
    if (r.quality_flag == QualityFlag::Unknown) {
      ++t.excluded_unknown_flag;
      continue;
    }
    auto& y = t.years[*year];
    (r.quality_flag == QualityFlag::WithControl ? y.with_control : y.without_control)++;
  }
  return t;
}

struct AnalysisOptions {
  std::size_t low_confidence_below = 10;
};

struct AnalysisReport {
  FieldMap<GroupAvailability> availability;
  YearlyTrend trend;
  AnalysisOptions options;
};

inline AnalysisReport analyze(const std::vector<OerRecord>& records, AnalysisOptions options = {}) {
  return {availability_by_group(records), yearly_control_trend(records), options};
}

namespace detail {

inline json optional_rate(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::string csv_rate(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

}  // namespace detail

inline json to_json(const AnalysisReport& r) {
  json avail = json::object();
  for (auto f : kScoredFields) {
    avail[std::string(field_name(f))] = {{"with_control_rate", detail::optional_rate(r.availability[f].with_control_rate)},
                                         {"without_control_rate", detail::optional_rate(r.availability[f].without_control_rate)}};
  }
  json years = json::array();
  for (const auto& [year, share] : r.trend.years) {
    years.push_back({{"year", year},
                     {"controlled_fraction", share.controlled_fraction()},
                     {"with_control", share.with_control},
                     {"without_control", share.without_control},
                     {"total", share.total()},
                     {"low_confidence", share.total() < r.options.low_confidence_below}});
  }
  return {{"availability_by_group", std::move(avail)},
          {"yearly_control_share", std::move(years)},
          {"excluded_undated", r.trend.excluded_undated},
          {"excluded_unknown_flag", r.trend.excluded_unknown_flag},
          {"low_confidence_below", r.options.low_confidence_below}};
}

inline std::string availability_csv(const AnalysisReport& r) {
  std::ostringstream os;
  os << "field,with_control_rate,without_control_rate\n";
  for (auto f : kScoredFields) {
    os << field_name(f) << ',' << detail::csv_rate(r.availability[f].with_control_rate) << ','
       << detail::csv_rate(r.availability[f].without_control_rate) << '\n';
  }
  return os.str();
}

inline std::string yearly_csv(const AnalysisReport& r) {
  std::ostringstream os;
  os << "year,controlled_fraction,with_control,without_control,total,low_confidence\n";
  for (const auto& [year, share] : r.trend.years) {
    os << year << ',' << detail::csv_rate(share.controlled_fraction()) << ',' << share.with_control << ','
       << share.without_control << ',' << share.total() << ','
       << (share.total() < r.options.low_confidence_below ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace oerq
