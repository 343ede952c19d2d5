// Scores one hand-written record against the published benchmark preset and
// prints the per-field ratings.

#include <cstdio>
#include <string>

#include "oerq/oerq.hpp"

int main() {
  oerq::OerRecord r;
  r.url = "https://oer.example/anatomy-101";
  r.title = "Human Anatomy for First Year Nursing Students";
  r.description = "Lecture slides and quizzes covering the skeletal and muscular systems.";
  r.subjects = {"nursing", "anatomy"};
  r.level = "Beginner";
  r.languages = {"English"};

  const auto benchmark = oerq::paper_benchmark();
  const auto scores = oerq::score_record(r, benchmark);

  std::printf("%-16s %8s %8s\n", "field", "weight", "rating");
  for (auto f : oerq::kScoredFields) {
    std::printf("%-16s %8.3f %8.3f\n", std::string(oerq::field_name(f)).c_str(), benchmark.normalized_importance[f],
                scores.per_field_rating[f]);
  }
  std::printf("\navailability %.3f\nnormal       %.3f\n", scores.availability, scores.normal);
}
