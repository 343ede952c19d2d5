#pragma once

// Field benchmark derived from quality-controlled records: importance rates
// (availability among controlled OERs), their normalization, and the length
// distributions used by the reverse z-score rating.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/error.hpp"
#include "oerq/metadata.hpp"

namespace oerq {

struct LengthDistribution {
  double mean = 0.0;
  double std = 1.0;

  friend bool operator==(const LengthDistribution&, const LengthDistribution&) = default;
};

// Indexed by position in kNumericFields.
using DistributionMap = std::array<LengthDistribution, kNumericFields.size()>;

constexpr std::size_t numeric_slot(ScoredField f) {
  switch (f) {
    case ScoredField::Title: return 0;
    case ScoredField::Description: return 1;
    case ScoredField::Subjects: return 2;
    default: break;
  }
  throw ContractViolation("field has no length distribution");
}

inline constexpr std::string_view kPaperProvenance = "paper-table-1";

struct Benchmark {
  FieldMap<double> importance;
  FieldMap<double> normalized_importance;
  DistributionMap distributions{};
  std::string provenance;

  const LengthDistribution& distribution(ScoredField f) const { return distributions[numeric_slot(f)]; }
  LengthDistribution& distribution(ScoredField f) { return distributions[numeric_slot(f)]; }

  friend bool operator==(const Benchmark&, const Benchmark&) = default;
};

// Fraction of `controlled` records where each field is present.
inline FieldMap<double> derive_importance(const std::vector<OerRecord>& controlled) {
  if (controlled.empty()) throw Error("empty benchmark population");
  FieldMap<std::size_t> present;
  for (const auto& r : controlled) {
    if (r.quality_flag != QualityFlag::WithControl) {
      throw ContractViolation("derive_importance: population must contain only WithControl records");
    }
    for (auto f : kScoredFields) {
      if (field_present(r, f)) ++present[f];
    }
  }
  FieldMap<double> out;
  const auto n = static_cast<double>(controlled.size());
  for (auto f : kScoredFields) out[f] = static_cast<double>(present[f]) / n;
  return out;
}

inline FieldMap<double> normalize_importance(const FieldMap<double>& importance) {
  double sum = 0.0;
  for (double v : importance) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("importance values must be finite and non-negative");
    sum += v;
  }
  if (sum <= 0.0) throw Error("cannot normalize: all importance values are zero");
  FieldMap<double> out;
  for (auto f : kScoredFields) out[f] = importance[f] / sum;
  return out;
}

// Sample mean and (n-1) standard deviation of field_length over the records
// where the field is present.
inline LengthDistribution fit_length_distribution(const std::vector<OerRecord>& controlled, ScoredField field) {
  if (!is_numeric_field(field)) throw ContractViolation("fit_length_distribution: field is not length-rated");
  std::vector<double> lengths;
  for (const auto& r : controlled) {
    if (field_present(r, field)) lengths.push_back(static_cast<double>(field_length(r, field)));
  }
  if (lengths.size() < 2) {
    throw Error("degenerate distribution: fewer than 2 records with '" + std::string(field_name(field)) + "'");
  }
  double mean = 0.0;
  for (double x : lengths) mean += x;
  mean /= static_cast<double>(lengths.size());
  double ss = 0.0;
  for (double x : lengths) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(lengths.size() - 1));
  if (!(sd > 0.0)) throw Error("degenerate distribution: zero spread for '" + std::string(field_name(field)) + "'");
  return {mean, sd};
}

// Benchmark from the WithControl subset of `records` (other flags ignored).
inline Benchmark derive_benchmark(const std::vector<OerRecord>& records, std::string provenance) {
  std::vector<OerRecord> controlled;
  for (const auto& r : records) {
    if (r.quality_flag == QualityFlag::WithControl) controlled.push_back(r);
  }
  Benchmark b;
  b.importance = derive_importance(controlled);
  b.normalized_importance = normalize_importance(b.importance);
  for (auto f : kNumericFields) b.distribution(f) = fit_length_distribution(controlled, f);
  b.provenance = std::move(provenance);
  return b;
}

// The published table, verbatim. Its rounded normalized column sums to 1.002.
inline Benchmark paper_benchmark() {
  Benchmark b;
  b.importance.values = {1.0, 1.0, 0.86, 0.98, 0.92, 0.58, 0.59};
  b.normalized_importance.values = {0.17, 0.17, 0.145, 0.165, 0.155, 0.098, 0.099};
  b.distribution(ScoredField::Title) = {5.5, 2.5};
  b.distribution(ScoredField::Description) = {54.5, 40.0};
  b.distribution(ScoredField::Subjects) = {4.5, 3.5};
  b.provenance = std::string(kPaperProvenance);
  return b;
}

// Throws Error unless every rate is in [0,1] and every std is positive.
inline void validate(const Benchmark& b) {
  for (auto f : kScoredFields) {
    for (double v : {b.importance[f], b.normalized_importance[f]}) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error("benchmark rate for '" + std::string(field_name(f)) + "' outside [0,1]");
    }
  }
  for (auto f : kNumericFields) {
    const auto& d = b.distribution(f);
    if (!std::isfinite(d.mean) || !(d.std > 0.0) || !std::isfinite(d.std)) {
      throw Error("benchmark distribution for '" + std::string(field_name(f)) + "' needs finite mean and std > 0");
    }
  }
}

inline json to_json(const Benchmark& b) {
  json j = json::object();
  json imp = json::object(), norm = json::object(), dist = json::object();
  for (auto f : kScoredFields) {
    imp[std::string(field_name(f))] = b.importance[f];
    norm[std::string(field_name(f))] = b.normalized_importance[f];
  }
  for (auto f : kNumericFields) {
    dist[std::string(field_name(f))] = {{"mean", b.distribution(f).mean}, {"std", b.distribution(f).std}};
  }
  j["importance"] = std::move(imp);
  j["normalized_importance"] = std::move(norm);
  j["distributions"] = std::move(dist);
  j["provenance"] = b.provenance;
  return j;
}

inline Benchmark benchmark_from_json(const json& j) {
  try {
    Benchmark b;
    for (auto f : kScoredFields) {
      const std::string key(field_name(f));
      b.importance[f] = j.at("importance").at(key).get<double>();
      b.normalized_importance[f] = j.at("normalized_importance").at(key).get<double>();
    }
    for (auto f : kNumericFields) {
      const auto& d = j.at("distributions").at(std::string(field_name(f)));
      b.distribution(f) = {d.at("mean").get<double>(), d.at("std").get<double>()};
    }
    b.provenance = j.value("provenance", std::string{});
    validate(b);
    return b;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed benchmark document: ") + e.what());
  }
}

}  // namespace oerq
