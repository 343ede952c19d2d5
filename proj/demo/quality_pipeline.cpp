// Benchmark, scoring, forest and evaluation in one process.
//
//   demo_quality_pipeline [dataset.jsonl|dataset.csv]
//
// Without an argument a two-regime synthetic corpus is used.

#include <cstdio>
#include <fstream>
#include <string>

#include "oerq/oerq.hpp"

int main(int argc, char** argv) {
  std::vector<oerq::OerRecord> records;
  if (argc > 1) {
    const std::string path = argv[1];
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "cannot open %s\n", path.c_str());
      return 2;
    }
    const auto format = path.ends_with(".csv") ? oerq::DatasetFormat::Csv : oerq::DatasetFormat::JsonLines;
    auto report = oerq::parse_dataset(in, format, path);
    std::printf("%zu parsed, %zu rejected\n", report.records.size(), report.rejected.size());
    records = std::move(report.records);
  } else {
    records = oerq::synthetic_corpus();
    std::printf("synthetic corpus, %zu records\n", records.size());
  }

  try {
    const auto benchmark = oerq::derive_benchmark(records, "derived");
    std::printf("\nbenchmark\n%s\n", oerq::to_json(benchmark).dump(2).c_str());

    oerq::PipelineOptions opt;
    opt.forest.seed = 42;
    opt.split_seed = 42;
    const auto result = oerq::run_pipeline(records, benchmark, opt);

    std::printf("\nholdout\n%s", oerq::render_table(result.test_report).c_str());
    std::printf("\nfeature importance\n");
    for (const auto& [feature, value] : oerq::feature_importance(result.model).entries) {
      std::printf("  %-20s %.3f\n", std::string(oerq::feature_name(feature)).c_str(), value);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
