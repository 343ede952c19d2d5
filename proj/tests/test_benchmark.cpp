#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oerq/benchmark.hpp"
#include "test_support.hpp"

using namespace oerq;

namespace {

OerRecord controlled_with_title_words(std::size_t n) {
  OerRecord r;
  r.quality_flag = QualityFlag::WithControl;
  for (std::size_t i = 0; i < n; ++i) r.title += (i ? " w" : "w");
  return r;
}

std::vector<OerRecord> controlled_population(Rng& rng, std::size_t n) {
  std::vector<OerRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = oerq::testing::random_record(rng);
    r.quality_flag = QualityFlag::WithControl;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(Benchmark, ImportanceOfUniversalFieldIsOne) {
  std::vector<OerRecord> pop;
  for (int i = 0; i < 5; ++i) pop.push_back(controlled_with_title_words(3));
  EXPECT_DOUBLE_EQ(derive_importance(pop)[ScoredField::Title], 1.0);
  EXPECT_DOUBLE_EQ(derive_importance(pop)[ScoredField::Level], 0.0);
}

TEST(Benchmark, ImportanceFractions) {
  std::vector<OerRecord> pop(100);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    pop[i].quality_flag = QualityFlag::WithControl;
    if (i < 58) pop[i].time_required = "2 hours";
    if (i < 75) pop[i].subjects = {"s"};
  }
  const auto imp = derive_importance(pop);
  EXPECT_DOUBLE_EQ(imp[ScoredField::TimeRequired], 0.58);
  EXPECT_DOUBLE_EQ(imp[ScoredField::Subjects], 0.75);

  std::vector<OerRecord> four(pop.begin() + 72, pop.begin() + 76);  // 3 with subjects
  EXPECT_DOUBLE_EQ(derive_importance(four)[ScoredField::Subjects], 0.75);
}

TEST(Benchmark, ImportanceErrors) {
  EXPECT_THROW(derive_importance({}), Error);
  std::vector<OerRecord> mixed(2);
  mixed[0].quality_flag = QualityFlag::WithControl;
  EXPECT_THROW(derive_importance(mixed), ContractViolation);
}

TEST(Benchmark, ImportanceMatchesRecountOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pop = controlled_population(rng, 1 + rng.below(200));
    const auto imp = derive_importance(pop);
    for (auto f : kScoredFields) {
      int hits = 0;
      for (const auto& r : pop) hits += field_present(r, f) ? 1 : 0;
      EXPECT_DOUBLE_EQ(imp[f], static_cast<double>(hits) / static_cast<double>(pop.size()));
    }
  }
}

TEST(Benchmark, NormalizesPublishedImportanceColumn) {
  FieldMap<double> imp;
  imp.values = {1, 1, 0.86, 0.98, 0.92, 0.58, 0.59};
  const auto norm = normalize_importance(imp);
  const auto published = paper_benchmark().normalized_importance;
  double sum = 0.0;
  for (auto f : kScoredFields) {
    EXPECT_NEAR(norm[f], published[f], 0.005) << field_name(f);
    EXPECT_NEAR(norm[f], imp[f] / 5.93, 1e-12);
    sum += norm[f];
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Benchmark, NormalizeEdgeCases) {
  FieldMap<double> single{};
  single[ScoredField::Language] = 0.3;
  const auto n1 = normalize_importance(single);
  for (auto f : kScoredFields) EXPECT_DOUBLE_EQ(n1[f], f == ScoredField::Language ? 1.0 : 0.0);

  FieldMap<double> uniform;
  uniform.values.fill(0.5);
  for (double v : normalize_importance(uniform)) EXPECT_NEAR(v, 1.0 / 7.0, 1e-15);

  EXPECT_THROW(normalize_importance(FieldMap<double>{}), Error);
}

TEST(Benchmark, NormalizeIsScaleInvariant) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    FieldMap<double> m;
    for (auto& v : m) v = rng.uniform();
    const double c = rng.uniform(0.01, 100.0);
    FieldMap<double> scaled;
    for (auto f : kScoredFields) scaled[f] = c * m[f];
    const auto a = normalize_importance(m), b = normalize_importance(scaled);
    for (auto f : kScoredFields) EXPECT_NEAR(a[f], b[f], 1e-12);
  }
}

TEST(Benchmark, FitLengthDistribution) {
  std::vector<OerRecord> two = {controlled_with_title_words(4), controlled_with_title_words(6)};
  const auto d2 = fit_length_distribution(two, ScoredField::Title);
  EXPECT_DOUBLE_EQ(d2.mean, 5.0);
  EXPECT_NEAR(d2.std, 1.4142135623730951, 1e-12);

  // Oracle: sample variance of {2,4,6,8,10} = (16+4+0+4+16)/4 = 10.
  std::vector<OerRecord> five;
  for (std::size_t n : {2, 4, 6, 8, 10}) five.push_back(controlled_with_title_words(n));
  const auto d5 = fit_length_distribution(five, ScoredField::Title);
  EXPECT_DOUBLE_EQ(d5.mean, 6.0);
  EXPECT_NEAR(d5.std, std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(d5.std, 3.1623, 1e-4);

  std::vector<OerRecord> flat(3, controlled_with_title_words(5));
  EXPECT_THROW(fit_length_distribution(flat, ScoredField::Title), Error);
  EXPECT_THROW(fit_length_distribution({controlled_with_title_words(5)}, ScoredField::Title), Error);
  EXPECT_THROW(fit_length_distribution(five, ScoredField::Level), ContractViolation);
}

TEST(Benchmark, FitIgnoresRecordsWithoutTheField) {
  std::vector<OerRecord> pop;
  for (std::size_t n : {2, 4, 6, 8, 10}) pop.push_back(controlled_with_title_words(n));
  const auto before = fit_length_distribution(pop, ScoredField::Title);
  pop.push_back(controlled_with_title_words(0));
  pop.back().title = "   ";
  const auto after = fit_length_distribution(pop, ScoredField::Title);
  EXPECT_EQ(before, after);
}

TEST(Benchmark, PublishedPreset) {
  const auto b = paper_benchmark();
  EXPECT_EQ(b.provenance, "paper-table-1");
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Title).mean, 5.5);
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Title).std, 2.5);
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Description).mean, 54.5);
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Description).std, 40.0);
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Subjects).mean, 4.5);
  EXPECT_DOUBLE_EQ(b.distribution(ScoredField::Subjects).std, 3.5);
  EXPECT_DOUBLE_EQ(b.normalized_importance[ScoredField::Level], 0.165);
  EXPECT_DOUBLE_EQ(b.importance[ScoredField::Accessibilities], 0.59);
  EXPECT_DOUBLE_EQ(b.importance[ScoredField::TimeRequired], 0.58);
  double sum = 0.0;
  for (double v : b.normalized_importance) sum += v;
  EXPECT_NEAR(sum, 1.002, 1e-12);
}

TEST(Benchmark, DerivedBenchmarkIsExactlyNormalized) {
  Rng rng(21);
  auto pop = controlled_population(rng, 400);
  pop.push_back(oerq::testing::complete_record());
  auto other = oerq::testing::random_record(rng);
  other.quality_flag = QualityFlag::WithoutControl;
  pop.push_back(other);
  const auto b = derive_benchmark(pop, "test");
  double imp_sum = 0.0, norm_sum = 0.0;
  for (auto f : kScoredFields) imp_sum += b.importance[f];
  for (auto f : kScoredFields) {
    norm_sum += b.normalized_importance[f];
    EXPECT_NEAR(b.normalized_importance[f], b.importance[f] / imp_sum, 1e-9);
  }
  EXPECT_NEAR(norm_sum, 1.0, 1e-9);
  EXPECT_NO_THROW(validate(b));
}

TEST(Benchmark, JsonRoundTrip) {
  const auto b = paper_benchmark();
  const auto j = to_json(b);
  EXPECT_EQ(j.at("distributions").at("title").at("std").get<double>(), 2.5);
  const auto back = benchmark_from_json(json::parse(j.dump()));
  EXPECT_EQ(back, b);
  // Keys follow field order.
  EXPECT_EQ(j.at("importance").begin().key(), "title");
}

TEST(Benchmark, JsonRejectsInvalidDocuments) {
  auto j = to_json(paper_benchmark());
  j["distributions"]["title"]["std"] = 0.0;
  EXPECT_THROW(benchmark_from_json(j), Error);
  auto k = to_json(paper_benchmark());
  k["importance"].erase("level");
  EXPECT_THROW(benchmark_from_json(k), Error);
}
