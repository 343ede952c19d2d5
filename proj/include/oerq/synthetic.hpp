#pragma once

// Two-regime synthetic corpus for tests and demos.
//   high regime (WithControl): each field present with probability p ~ U[0.9, 1.0],
//     lengths drawn from normals at the published benchmark means/stds;
//   low regime (WithoutControl): p ~ U[0.3, 0.6], lengths drawn uniformly over
//     a wider range.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oerq/metadata.hpp"
#include "oerq/random.hpp"

namespace oerq {

struct SyntheticCorpusOptions {
  std::size_t record_count = 2000;
  double high_fraction = 0.5;
  std::uint64_t seed = 7;
  int first_year = 2015;
  int last_year = 2020;
};

namespace detail {

inline std::string synthetic_words(Rng& rng, std::size_t n) {
  static constexpr std::array<std::string_view, 16> vocab = {
      "health", "care",    "nursing", "information", "technology", "network", "patient", "data",
      "safety", "systems", "course",  "module",      "clinical",   "cloud",   "skills",  "lab"};
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += vocab[rng.below(vocab.size())];
  }
  return out;
}

inline std::size_t normal_length(Rng& rng, double mean, double sd) {
  return static_cast<std::size_t>(std::max(1.0, std::round(rng.normal(mean, sd))));
}

inline std::size_t uniform_length(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

}  // namespace detail

inline OerRecord synthetic_record(Rng& rng, bool high, std::size_t serial, const SyntheticCorpusOptions& opt) {
  const double p = high ? rng.uniform(0.9, 1.0) : rng.uniform(0.3, 0.6);
  auto present = [&] { return rng.bernoulli(p); };

  OerRecord r;
  r.url = "https://oer.example.org/item/" + std::to_string(serial);
  r.material_type = high ? "Course" : "Module";
  r.quality_flag = high ? QualityFlag::WithControl : QualityFlag::WithoutControl;

  if (present()) r.title = detail::synthetic_words(rng, high ? detail::normal_length(rng, 5.5, 2.5) : detail::uniform_length(rng, 1, 25));
  if (present()) r.description = detail::synthetic_words(rng, high ? detail::normal_length(rng, 54.5, 40.0) : detail::uniform_length(rng, 1, 300));
  if (present()) {
    const auto n = high ? detail::normal_length(rng, 4.5, 3.5) : detail::uniform_length(rng, 1, 15);
    for (std::size_t i = 0; i < n; ++i) r.subjects.push_back(detail::synthetic_words(rng, 1 + rng.below(2)));
  }
  static constexpr std::array<std::string_view, 3> levels = {"Beginner", "Intermediate", "Advanced"};
  if (present()) r.level = std::string(levels[rng.below(levels.size())]);
  if (present()) r.languages = {"English"};
  if (present()) r.time_required = std::to_string(1 + rng.below(12)) + " weeks";
  if (present()) r.accessibilities = {"Captions"};

  const int span = opt.last_year - opt.first_year + 1;
  const int year = opt.first_year + static_cast<int>(rng.below(static_cast<std::size_t>(span)));
  r.date_issued = make_date(year, static_cast<unsigned>(1 + rng.below(12)), static_cast<unsigned>(1 + rng.below(28)));
  r.date_available = r.date_issued;
  return r;
}

inline std::vector<OerRecord> synthetic_corpus(const SyntheticCorpusOptions& opt = {}) {
  Rng rng(opt.seed);
  const auto high_count = static_cast<std::size_t>(std::llround(opt.high_fraction * static_cast<double>(opt.record_count)));
  std::vector<char> regime(opt.record_count, 0);
  std::fill(regime.begin(), regime.begin() + static_cast<std::ptrdiff_t>(std::min(high_count, opt.record_count)), 1);
  rng.shuffle(regime);
  std::vector<OerRecord> out;
  out.reserve(opt.record_count);
  for (std::size_t i = 0; i < opt.record_count; ++i) out.push_back(synthetic_record(rng, regime[i] != 0, i + 1, opt));
  return out;
}

}  // namespace oerq
