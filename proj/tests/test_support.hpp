#pragma once

// Shared generators for property-style tests.

#include <cstdint>
#include <string>
#include <vector>

#include "oerq/metadata.hpp"
#include "oerq/random.hpp"

namespace oerq::testing {

inline std::string random_words(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += (rng.below(5) == 0) ? "  " : " ";
    out += "w" + std::to_string(rng.below(100));
  }
  return out;
}

inline std::vector<std::string> random_list(Rng& rng, std::size_t max_len) {
  std::vector<std::string> out;
  const auto n = rng.below(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.below(6) == 0 ? std::string() : random_words(rng, 1 + rng.below(2)));
  return out;
}

// Each field independently present with probability 1/2; lengths spread well
// beyond one std of the published means.
inline OerRecord random_record(Rng& rng) {
  OerRecord r;
  r.url = "https://example.org/" + std::to_string(rng.below(1000000));
  if (rng.bernoulli(0.5)) r.title = random_words(rng, 1 + rng.below(20));
  if (rng.bernoulli(0.5)) r.description = random_words(rng, 1 + rng.below(200));
  if (rng.bernoulli(0.5)) r.subjects = random_list(rng, 15);
  if (rng.bernoulli(0.5)) r.level = rng.bernoulli(0.8) ? std::string("Beginner") : std::string();
  if (rng.bernoulli(0.5)) r.languages = random_list(rng, 2);
  if (rng.bernoulli(0.5)) r.time_required = std::to_string(rng.below(10)) + " hours";
  if (rng.bernoulli(0.5)) r.accessibilities = random_list(rng, 3);
  if (rng.bernoulli(0.7)) r.date_issued = make_date(2014 + static_cast<int>(rng.below(7)), 1 + static_cast<unsigned>(rng.below(12)), 1 + static_cast<unsigned>(rng.below(28)));
  if (rng.bernoulli(0.5)) r.date_available = make_date(2014 + static_cast<int>(rng.below(7)), 6, 15);
  const auto q = rng.below(3);
  r.quality_flag = q == 0 ? QualityFlag::WithControl : q == 1 ? QualityFlag::WithoutControl : QualityFlag::Unknown;
  return r;
}

inline OerRecord complete_record() {
  OerRecord r;
  r.url = "https://example.org/complete";
  r.title = "Introduction to Basic Health Care";  // 5 words
  for (int i = 0; i < 54; ++i) r.description += (i ? " d" : "d");
  r.subjects = {"nursing", "anatomy", "ethics", "safety"};
  r.level = "Beginner";
  r.languages = {"English"};
  r.time_required = "4 weeks";
  r.accessibilities = {"Captions"};
  r.quality_flag = QualityFlag::WithControl;
  return r;
}

}  // namespace oerq::testing
