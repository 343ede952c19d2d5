#include <gtest/gtest.h>

#include <vector>

#include "oerq/analysis.hpp"
#include "oerq/benchmark.hpp"
#include "test_support.hpp"

using namespace oerq;

namespace {

OerRecord dated(int year, QualityFlag q) {
  OerRecord r;
  r.date_issued = make_date(year, 6, 1);
  r.quality_flag = q;
  return r;
}

}  // namespace

TEST(Analysis, AvailabilityByGroup) {
  std::vector<OerRecord> rs(4);
  rs[0].quality_flag = rs[1].quality_flag = QualityFlag::WithControl;
  rs[2].quality_flag = rs[3].quality_flag = QualityFlag::WithoutControl;
  for (auto& r : rs) r.title = "x";
  rs[0].subjects = {"a"};
  rs[2].subjects = {"b"};
  rs[3].subjects = {"c"};
  const auto a = availability_by_group(rs);
  EXPECT_EQ(a[ScoredField::Subjects], (GroupAvailability{0.5, 1.0}));
  EXPECT_EQ(a[ScoredField::Title].with_control_rate, 1.0);
  EXPECT_EQ(a[ScoredField::Level].without_control_rate, 0.0);
}

TEST(Analysis, EmptyGroupsAreAbsentNotZero) {
  const auto empty = availability_by_group({});
  for (const auto& g : empty) {
    EXPECT_FALSE(g.with_control_rate.has_value());
    EXPECT_FALSE(g.without_control_rate.has_value());
  }
  OerRecord unknown;
  unknown.title = "t";
  const auto only_unknown = availability_by_group({unknown});
  EXPECT_FALSE(only_unknown[ScoredField::Title].with_control_rate.has_value());
}

TEST(Analysis, ControlledAvailabilityEqualsImportance) {
  Rng rng(13);
  std::vector<OerRecord> rs;
  for (int i = 0; i < 500; ++i) rs.push_back(oerq::testing::random_record(rng));
  std::vector<OerRecord> controlled;
  for (const auto& r : rs) {
    if (r.quality_flag == QualityFlag::WithControl) controlled.push_back(r);
  }
  const auto by_group = availability_by_group(rs);
  const auto imp = derive_importance(controlled);
  for (auto f : kScoredFields) EXPECT_DOUBLE_EQ(*by_group[f].with_control_rate, imp[f]);
}

TEST(Analysis, YearlyTrend) {
  std::vector<OerRecord> rs = {dated(2016, QualityFlag::WithControl), dated(2016, QualityFlag::WithControl),
                               dated(2016, QualityFlag::WithControl), dated(2016, QualityFlag::WithoutControl)};
  const auto t = yearly_control_trend(rs);
  ASSERT_EQ(t.years.size(), 1u);
  EXPECT_DOUBLE_EQ(t.years.at(2016).controlled_fraction(), 0.75);
  EXPECT_EQ(t.years.at(2016).total(), 4u);
}

TEST(Analysis, YearFallsBackToAvailableDate) {
  OerRecord r;
  r.date_available = make_date(2019, 1, 1);
  r.quality_flag = QualityFlag::WithoutControl;
  OerRecord both = dated(2017, QualityFlag::WithControl);
  both.date_available = make_date(2019, 1, 1);
  const auto t = yearly_control_trend({r, both});
  EXPECT_EQ(t.years.at(2019).total(), 1u);
  EXPECT_EQ(t.years.at(2017).with_control, 1u);
}

TEST(Analysis, UndatedRecordsAreCountedSeparately) {
  std::vector<OerRecord> rs(5);
  const auto t = yearly_control_trend(rs);
  EXPECT_TRUE(t.years.empty());
  EXPECT_EQ(t.excluded_undated, 5u);
}

TEST(Analysis, TrendTotalsAccountForEveryRecord) {
  Rng rng(14);
  std::vector<OerRecord> rs;
  for (int i = 0; i < 700; ++i) rs.push_back(oerq::testing::random_record(rng));
  const auto t = yearly_control_trend(rs);
  std::size_t total = t.excluded_undated + t.excluded_unknown_flag;
  for (const auto& [year, share] : t.years) {
    total += share.total();
    EXPECT_GE(share.controlled_fraction(), 0.0);
    EXPECT_LE(share.controlled_fraction(), 1.0);
  }
  EXPECT_EQ(total, rs.size());
}

TEST(Analysis, ReportSerialization) {
  std::vector<OerRecord> rs;
  for (int i = 0; i < 12; ++i) rs.push_back(dated(2018, QualityFlag::WithControl));
  rs.push_back(dated(2019, QualityFlag::WithoutControl));
  const auto report = analyze(rs, {10});
  const auto j = to_json(report);
  ASSERT_EQ(j.at("yearly_control_share").size(), 2u);
  EXPECT_EQ(j.at("yearly_control_share")[0].at("low_confidence"), false);
  EXPECT_EQ(j.at("yearly_control_share")[1].at("low_confidence"), true);
  EXPECT_TRUE(j.at("availability_by_group").at("title").at("with_control_rate").is_number());

  const auto years = yearly_csv(report);
  EXPECT_NE(years.find("2018,1.000000,12,0,12,false"), std::string::npos);
  EXPECT_NE(years.find("2019,0.000000,0,1,1,true"), std::string::npos);
  const auto avail = availability_csv(report);
  EXPECT_EQ(avail.substr(0, avail.find('\n')), "field,with_control_rate,without_control_rate");
}
