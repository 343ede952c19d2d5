#pragma once

// In-process composition of benchmark -> features -> split -> forest -> metrics.
// The CLI subcommands are thin file-level wrappers over these same calls.

#include <cstdint>
#include <string>
#include <vector>

#include "oerq/benchmark.hpp"
#include "oerq/classifier.hpp"
#include "oerq/evaluation.hpp"
#include "oerq/metadata.hpp"

namespace oerq {

struct LabeledFeatures {
  std::vector<FeatureRow> rows;
  std::vector<QualityFlag> labels;
};

// Records with an Unknown flag are skipped.
inline LabeledFeatures labeled_features(const std::vector<OerRecord>& records, const Benchmark& benchmark) {
  LabeledFeatures out;
  for (const auto& r : records) {
    if (r.quality_flag == QualityFlag::Unknown) continue;
    out.rows.push_back(extract_features(r, benchmark).row());
    out.labels.push_back(r.quality_flag);
  }
  return out;
}

inline std::vector<OerRecord> labeled_only(const std::vector<OerRecord>& records) {
  std::vector<OerRecord> out;
  for (const auto& r : records) {
    if (r.quality_flag != QualityFlag::Unknown) out.push_back(r);
  }
  return out;
}

struct PipelineOptions {
  ForestHyperparams forest;
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;
  unsigned threads = 1;
};

struct PipelineResult {
  Benchmark benchmark;
  Split<OerRecord> split;
  ForestModel model;
  EvalReport train_report;
  EvalReport test_report;
};

inline PipelineResult run_pipeline(const std::vector<OerRecord>& records, const Benchmark& benchmark,
                                   const PipelineOptions& opt) {
  PipelineResult out;
  out.benchmark = benchmark;
  out.split = stratified_split(labeled_only(records), opt.train_fraction, opt.split_seed);
  const auto train = labeled_features(out.split.train, benchmark);
  const auto test = labeled_features(out.split.test, benchmark);
  out.model = train_forest(std::span<const FeatureRow>(train.rows), std::span<const QualityFlag>(train.labels), opt.forest,
                           TrainOptions{opt.threads});
  out.train_report = evaluate(out.model, std::span<const FeatureRow>(train.rows), std::span<const QualityFlag>(train.labels));
  out.test_report = evaluate(out.model, std::span<const FeatureRow>(test.rows), std::span<const QualityFlag>(test.labels));
  return out;
}

}  // namespace oerq
