#pragma once

// Per-field rating functions and the two record scores:
//   availability = sum of normalized importance over present fields
//   normal       = sum over all fields of normalized importance * rating

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/benchmark.hpp"
#include "oerq/error.hpp"
#include "oerq/metadata.hpp"

namespace oerq {

// Reverse z-score: 1 / max(1, ceil(|length - mean| / std)); 0 for an empty field.
inline double numeric_rating(std::size_t length, const LengthDistribution& dist) {
  if (!(dist.std > 0.0)) throw ContractViolation("numeric_rating: std must be positive");
  if (length == 0) return 0.0;
  const double z = std::abs(static_cast<double>(length) - dist.mean) / dist.std;
  return 1.0 / std::max(1.0, std::ceil(z));
}

constexpr double boolean_rating(bool present) { return present ? 1.0 : 0.0; }

inline double field_rating(const OerRecord& r, ScoredField f, const Benchmark& b) {
  if (is_numeric_field(f)) return numeric_rating(field_length(r, f), b.distribution(f));
  return boolean_rating(field_present(r, f));
}

inline double availability_score(const OerRecord& r, const Benchmark& b) {
  double sum = 0.0;
  for (auto f : kScoredFields) {
    if (field_present(r, f)) sum += b.normalized_importance[f];
  }
  return sum;
}

inline double normal_score(const OerRecord& r, const Benchmark& b) {
  double sum = 0.0;
  for (auto f : kScoredFields) sum += b.normalized_importance[f] * field_rating(r, f, b);
  return sum;
}

struct QualityScores {
  double availability = 0.0;
  double normal = 0.0;
  FieldMap<double> per_field_rating;

  friend bool operator==(const QualityScores&, const QualityScores&) = default;
};

inline QualityScores score_record(const OerRecord& r, const Benchmark& b) {
  QualityScores s;
  for (auto f : kScoredFields) s.per_field_rating[f] = field_rating(r, f, b);
  s.availability = availability_score(r, b);
  s.normal = normal_score(r, b);
  return s;
}

inline std::vector<QualityScores> score_batch(const std::vector<OerRecord>& records, const Benchmark& b) {
  std::vector<QualityScores> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(score_record(r, b));
  return out;
}

inline json scores_to_json(const OerRecord& r, const QualityScores& s) {
  json ratings = json::object();
  for (auto f : kScoredFields) ratings[std::string(field_name(f))] = s.per_field_rating[f];
  return {{"url", r.url}, {"availability", s.availability}, {"normal", s.normal}, {"ratings", std::move(ratings)}};
}

}  // namespace oerq
