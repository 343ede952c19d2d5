#pragma once

// Stratified train/test split and binary classification metrics.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/classifier.hpp"
#include "oerq/error.hpp"
#include "oerq/metadata.hpp"
#include "oerq/random.hpp"

namespace oerq {

template <class T>
struct Split {
  std::vector<T> train;
  std::vector<T> test;
};

// Number of items of a class that go to the training side.
inline std::size_t train_share(std::size_t class_size, double fraction) {
  // The epsilon absorbs products such as 0.7 * 10 = 7.000000000000001.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(class_size) + 1e-9));
}

// Shuffles each class independently (seeded) and sends the first
// floor(fraction * class size) of each to train. Both sides keep input order.
template <class T, class LabelOf>
Split<T> stratified_split(const std::vector<T>& items, double fraction, std::uint64_t seed, LabelOf label_of) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("split fraction must lie strictly between 0 and 1");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < items.size(); ++i) by_class[class_index(label_of(items[i]))].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) throw Error("stratified split needs both classes present");

  Rng rng(seed);
  std::vector<bool> in_train(items.size(), false);
  for (auto& members : by_class) {
    rng.shuffle(members);
    const auto k = train_share(members.size(), fraction);
    for (std::size_t j = 0; j < k; ++j) in_train[members[j]] = true;
  }
  Split<T> out;
  for (std::size_t i = 0; i < items.size(); ++i) (in_train[i] ? out.train : out.test).push_back(items[i]);
  return out;
}

inline Split<OerRecord> stratified_split(const std::vector<OerRecord>& records, double fraction, std::uint64_t seed) {
  return stratified_split(records, fraction, seed, [](const OerRecord& r) { return r.quality_flag; });
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  // confusion[true class][predicted class], class order = kClassLabels.
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  double accuracy = 0.0;
  std::array<ClassMetrics, 2> per_class{};
  std::size_t test_count = 0;
};

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline EvalReport report_from_predictions(std::span<const QualityFlag> truth, std::span<const QualityFlag> predicted) {
  if (truth.size() != predicted.size()) throw Error("truth and prediction counts differ");
  if (truth.empty()) throw Error("empty test set");
  EvalReport rep;
  rep.test_count = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) ++rep.confusion[class_index(truth[i])][class_index(predicted[i])];
  rep.accuracy = static_cast<double>(rep.confusion[0][0] + rep.confusion[1][1]) / static_cast<double>(rep.test_count);
  for (std::size_t c = 0; c < 2; ++c) {
    const double tp = static_cast<double>(rep.confusion[c][c]);
    const double predicted_c = static_cast<double>(rep.confusion[0][c] + rep.confusion[1][c]);
    const double actual_c = static_cast<double>(rep.confusion[c][0] + rep.confusion[c][1]);
    auto& m = rep.per_class[c];
    m.precision = safe_ratio(tp, predicted_c);
    m.recall = safe_ratio(tp, actual_c);
    m.f1 = safe_ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  }
  return rep;
}

inline EvalReport evaluate(const ForestModel& model, std::span<const FeatureRow> rows, std::span<const QualityFlag> labels) {
  if (rows.size() != labels.size()) throw Error("feature and label counts differ");
  if (rows.empty()) throw Error("empty test set");
  std::vector<QualityFlag> predicted;
  predicted.reserve(rows.size());
  for (const auto& x : rows) predicted.push_back(predict(model, x).label);
  return report_from_predictions(labels, predicted);
}

inline EvalReport evaluate(const ForestModel& model, const std::vector<FeatureVector>& features,
                           const std::vector<QualityFlag>& labels) {
  std::vector<FeatureRow> rows;
  rows.reserve(features.size());
  for (const auto& f : features) rows.push_back(f.row());
  return evaluate(model, std::span<const FeatureRow>(rows), std::span<const QualityFlag>(labels));
}

inline json to_json(const EvalReport& r) {
  json per_class = json::object();
  for (std::size_t c = 0; c < 2; ++c) {
    per_class[std::string(quality_flag_label(kClassLabels[c]))] = {
        {"precision", r.per_class[c].precision}, {"recall", r.per_class[c].recall}, {"f1", r.per_class[c].f1}};
  }
  return {{"test_count", r.test_count},
          {"accuracy", r.accuracy},
          {"class_labels", {std::string(quality_flag_label(kClassLabels[0])), std::string(quality_flag_label(kClassLabels[1]))}},
          {"confusion", {{r.confusion[0][0], r.confusion[0][1]}, {r.confusion[1][0], r.confusion[1][1]}}},
          {"per_class", std::move(per_class)}};
}

inline std::string render_table(const EvalReport& r) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-18s %10s %10s %10s %8s\n", "class", "precision", "recall", "f1", "support");
  os << line;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& m = r.per_class[c];
    std::snprintf(line, sizeof(line), "%-18s %10.4f %10.4f %10.4f %8zu\n",
                  std::string(quality_flag_label(kClassLabels[c])).c_str(), m.precision, m.recall, m.f1,
                  r.confusion[c][0] + r.confusion[c][1]);
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-18s %10s %10s %10.4f %8zu\n", "accuracy", "", "", r.accuracy, r.test_count);
  os << line;
  os << "confusion (rows = true, cols = predicted):\n";
  std::snprintf(line, sizeof(line), "%-18s %16s %16s\n", "", "with control", "without control");
  os << line;
  for (std::size_t c = 0; c < 2; ++c) {
    std::snprintf(line, sizeof(line), "%-18s %16zu %16zu\n", std::string(quality_flag_label(kClassLabels[c])).c_str(),
                  r.confusion[c][0], r.confusion[c][1]);
    os << line;
  }
  return os.str();
}

}  // namespace oerq
