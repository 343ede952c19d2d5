// oerq: command-line front end for OER metadata scoring and quality prediction.
//
// Exit codes: 0 success, 2 input/validation error, 3 external-service failure.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oerq/http_transport.hpp"
#include "oerq/oerq.hpp"

namespace fs = std::filesystem;
using oerq::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitService = 3;

bool g_verbose = false;

void log(const std::string& msg) {
  if (g_verbose) std::cerr << "[oerq] " << msg << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw oerq::Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw oerq::Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw oerq::Error("failed writing '" + path + "'");
}

// Timestamps live only in the sidecar so primary outputs stay byte-reproducible.
void write_sidecar(const std::string& path, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_file(path + ".meta.json", json{{"command", command}, {"generated_at", stamp}, {"output", path}}.dump(2) + "\n");
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw oerq::Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct InputSpec {
  std::string path;
  std::string format;  // empty = infer from extension
};

oerq::DatasetFormat resolve_format(const InputSpec& in) {
  if (!in.format.empty()) return oerq::parse_format_tag(in.format);
  return fs::path(in.path).extension() == ".csv" ? oerq::DatasetFormat::Csv : oerq::DatasetFormat::JsonLines;
}

oerq::IngestReport load(const InputSpec& in) {
  const auto data = read_file(in.path);
  auto report = oerq::parse_dataset(std::string_view(data), resolve_format(in), in.path);
  log(in.path + ": " + std::to_string(report.records.size()) + " parsed, " + std::to_string(report.rejected.size()) +
      " rejected");
  return report;
}

oerq::Benchmark resolve_benchmark(const std::string& source, const std::vector<oerq::OerRecord>& records,
                                  const std::string& input_path) {
  if (source == "paper") return oerq::paper_benchmark();
  if (source == "derive") return oerq::derive_benchmark(records, "derived:" + input_path);
  return oerq::benchmark_from_json(parse_json_file(source));
}

void add_input(CLI::App* cmd, InputSpec& in) {
  cmd->add_option("-i,--input", in.path, "Input dataset")->required();
  cmd->add_option("--format", in.format, "Input format: jsonl or csv (default: by extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
}

struct ForestFlags {
  std::size_t trees = 100;
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 2;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  double split = 0.8;

  oerq::ForestHyperparams hyperparams() const {
    oerq::ForestHyperparams p;
    p.tree_count = trees;
    if (max_depth > 0) p.max_depth = max_depth;
    p.min_samples_leaf = min_leaf;
    p.features_per_split = features_per_split;
    p.seed = seed;
    return p;
  }
};

// ---- subcommands ----------------------------------------------------------

int cmd_ingest(const InputSpec& in, const std::string& output) {
  const auto report = load(in);
  if (!report.rejected.empty() || !report.notes.empty()) {
    std::cerr << json{{"rejected", oerq::issues_to_json(report.rejected)}, {"notes", oerq::issues_to_json(report.notes)}}.dump()
              << '\n';
  }
  std::cout << report.records.size() << " parsed, " << report.rejected.size() << " rejected\n";
  std::cout << oerq::to_json(oerq::dataset_summary(report.records)).dump() << '\n';
  if (report.records.empty()) {
    std::cerr << "error: no records parsed from '" << in.path << "'\n";
    return kExitInput;
  }
  if (!output.empty()) write_file(output, oerq::to_jsonl(report.records));
  return kExitOk;
}

int cmd_benchmark(const InputSpec& in, const std::string& output, bool paper) {
  oerq::Benchmark b;
  if (paper) {
    b = oerq::paper_benchmark();
  } else {
    const auto report = load(in);
    b = oerq::derive_benchmark(report.records, "derived:" + in.path);
  }
  const auto doc = oerq::to_json(b).dump(2) + "\n";
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_file(output, doc);
    std::cout << "benchmark written to " << output << " (" << b.provenance << ")\n";
  }
  return kExitOk;
}

int cmd_score(const InputSpec& in, const std::string& benchmark_source, const std::string& output) {
  const auto report = load(in);
  const auto b = resolve_benchmark(benchmark_source, report.records, in.path);
  const auto scores = oerq::score_batch(report.records, b);
  std::ostringstream os;
  for (std::size_t i = 0; i < scores.size(); ++i) os << oerq::scores_to_json(report.records[i], scores[i]).dump() << '\n';
  if (output.empty()) {
    std::cout << os.str();
  } else {
    write_file(output, os.str());
    std::cout << scores.size() << " records scored against " << b.provenance << '\n';
  }
  return kExitOk;
}

int cmd_train(const InputSpec& in, const std::string& benchmark_source, const ForestFlags& flags,
              const std::string& model_out, const std::string& test_out) {
  const auto report = load(in);
  const auto b = resolve_benchmark(benchmark_source, report.records, in.path);
  oerq::PipelineOptions opt;
  opt.forest = flags.hyperparams();
  opt.train_fraction = flags.split;
  opt.split_seed = flags.seed;
  opt.threads = flags.threads;
  const auto result = oerq::run_pipeline(report.records, b, opt);

  json importance = json::array();
  for (const auto& [f, v] : oerq::feature_importance(result.model).entries) {
    importance.push_back({{"feature", std::string(oerq::feature_name(f))}, {"importance", v}});
  }
  const json run_config = {{"input", in.path},
                           {"benchmark", benchmark_source},
                           {"split", flags.split},
                           {"seed", flags.seed},
                           {"hyperparams", oerq::to_json(opt.forest)}};

  json model_doc = oerq::to_json(result.model);
  model_doc["benchmark"] = oerq::to_json(b);
  model_doc["run_config"] = run_config;
  write_file(model_out, model_doc.dump() + "\n");
  write_sidecar(model_out, "train");
  if (!test_out.empty()) write_file(test_out, oerq::to_jsonl(result.split.test));

  const json summary = {{"train_count", result.train_report.test_count},
                        {"holdout_count", result.split.test.size()},
                        {"train_accuracy", result.train_report.accuracy},
                        {"holdout_accuracy", result.test_report.accuracy},
                        {"feature_importance", importance},
                        {"run_config", run_config}};
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

struct LoadedModel {
  oerq::ForestModel forest;
  oerq::Benchmark benchmark;
};

LoadedModel load_model(const std::string& path) {
  const auto doc = parse_json_file(path);
  if (!doc.contains("benchmark")) throw oerq::Error("model file '" + path + "' carries no benchmark");
  return {oerq::forest_from_json(doc), oerq::benchmark_from_json(doc.at("benchmark"))};
}

int cmd_evaluate(const std::string& model_path, const InputSpec& in, const std::string& output) {
  const auto model = load_model(model_path);
  const auto report = load(in);
  const auto data = oerq::labeled_features(report.records, model.benchmark);
  if (data.rows.empty()) {
    std::cerr << "error: no labelled records to evaluate in '" << in.path << "'\n";
    return kExitInput;
  }
  const auto eval = oerq::evaluate(model.forest, std::span<const oerq::FeatureRow>(data.rows),
                                   std::span<const oerq::QualityFlag>(data.labels));
  std::cout << oerq::render_table(eval);
  if (!output.empty()) {
    json doc = oerq::to_json(eval);
    doc["run_config"] = {{"model", model_path}, {"input", in.path}};
    write_file(output, doc.dump(2) + "\n");
    write_sidecar(output, "evaluate");
  }
  return kExitOk;
}

int cmd_analyze(const InputSpec& in, const std::string& output, const std::string& csv_dir, std::size_t low_conf) {
  const auto report = load(in);
  const auto analysis = oerq::analyze(report.records, {low_conf});
  const auto doc = oerq::to_json(analysis).dump(2) + "\n";
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_file(output, doc);
  }
  if (!csv_dir.empty()) {
    write_file((fs::path(csv_dir) / "availability_by_group.csv").string(), oerq::availability_csv(analysis));
    write_file((fs::path(csv_dir) / "yearly_control_share.csv").string(), oerq::yearly_csv(analysis));
  }
  return kExitOk;
}

int cmd_predict(const std::string& model_path) {
  const auto model = load_model(model_path);
  const std::string line{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  json raw;
  try {
    raw = json::parse(line);
  } catch (const json::parse_error& e) {
    throw oerq::Error(std::string("stdin is not a JSON record: ") + e.what());
  }
  const auto record = oerq::normalized(oerq::record_from_json(raw));
  const auto scores = oerq::score_record(record, model.benchmark);
  const auto prediction = oerq::predict(model.forest, oerq::extract_features(record, model.benchmark));
  auto out = oerq::scores_to_json(record, scores);
  out["label"] = std::string(oerq::quality_flag_label(prediction.label));
  out["vote_fraction"] = prediction.vote_fraction;
  std::cout << out.dump() << '\n';
  return kExitOk;
}

struct HarvestFlags {
  oerq::HarvestConfig config;
  std::size_t timeout_s = 30;
  std::size_t backoff_ms = 500;
  std::string mapping;
  std::string transcript;
  bool live = false;
  std::string output;
};

int cmd_harvest(HarvestFlags flags) {
  flags.config.request_timeout = std::chrono::seconds(flags.timeout_s);
  flags.config.initial_backoff = std::chrono::milliseconds(flags.backoff_ms);
  const auto mapping = flags.mapping.empty() ? oerq::default_harvest_mapping()
                                             : oerq::harvest_mapping_from_json(parse_json_file(flags.mapping));
  if (!mapping.verified) log("harvest mapping is unverified against the live API schema");

  oerq::HarvestReport result;
  if (!flags.transcript.empty()) {
    auto transport = oerq::ScriptedTransport::from_json(parse_json_file(flags.transcript));
    // Scripted runs replay a fixed transcript; waiting between retries adds nothing.
    result = oerq::harvest(flags.config, transport, mapping, [](std::chrono::milliseconds) {});
  } else if (flags.live) {
    if (flags.config.base_url.empty()) throw oerq::Error("--base-url is required for live harvesting");
    oerq::HttplibTransport transport;
    result = oerq::harvest(flags.config, transport, mapping);
  } else {
    throw oerq::Error("harvest needs --transcript FILE (offline) or --live (network)");
  }

  if (!flags.output.empty()) write_file(flags.output, oerq::to_jsonl(result.ingest.records));
  const json summary = {{"records", result.ingest.records.size()},
                        {"rejected", oerq::issues_to_json(result.ingest.rejected)},
                        {"pages", result.pages},
                        {"requests", result.requests},
                        {"retries", result.retries},
                        {"error", result.error ? json(*result.error) : json(nullptr)}};
  std::cout << summary.dump() << '\n';
  if (!result.ok()) {
    std::cerr << "error: " << *result.error << '\n';
    return kExitService;
  }
  return kExitOk;
}

int cmd_synth(std::size_t count, std::uint64_t seed, const std::string& output) {
  oerq::SyntheticCorpusOptions opt;
  opt.record_count = count;
  opt.seed = seed;
  const auto corpus = oerq::synthetic_corpus(opt);
  write_file(output, oerq::to_jsonl(corpus));
  std::cout << corpus.size() << " synthetic records written to " << output << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OER metadata quality scoring and quality-control prediction"};
  app.set_config("--config", "", "Optional TOML/INI config file; command-line flags take precedence");
  app.add_flag("-v,--verbose", g_verbose, "Log progress to stderr");
  app.require_subcommand(1);

  InputSpec in;
  std::string output;
  std::string benchmark_source = "derive";
  ForestFlags forest;

  auto* ingest = app.add_subcommand("ingest", "Parse a dataset and write canonical JSON-lines");
  add_input(ingest, in);
  ingest->add_option("-o,--output", output, "Canonical JSON-lines output");

  bool paper = false;
  auto* bench = app.add_subcommand("benchmark", "Derive the field benchmark from quality-controlled records");
  bench->add_option("-i,--input", in.path, "Input dataset");
  bench->add_option("--format", in.format, "Input format: jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  bench->add_option("-o,--output", output, "Benchmark JSON output");
  bench->add_flag("--paper", paper, "Emit the published benchmark table instead of deriving one");

  auto* score = app.add_subcommand("score", "Compute availability and normal scores");
  add_input(score, in);
  score->add_option("--benchmark", benchmark_source, "derive | paper | PATH")->capture_default_str();
  score->add_option("-o,--output", output, "Scored JSON-lines output");

  std::string test_out;
  auto* train = app.add_subcommand("train", "Split, train the forest and write a model file");
  add_input(train, in);
  train->add_option("--benchmark", benchmark_source, "derive | paper | PATH")->capture_default_str();
  train->add_option("--trees", forest.trees, "Number of trees")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--max-depth", forest.max_depth, "Maximum depth (0 = unlimited)")->capture_default_str();
  train->add_option("--min-leaf", forest.min_leaf, "Minimum samples per leaf")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--features-per-split", forest.features_per_split, "Features tried per split")
      ->capture_default_str()
      ->check(CLI::Range(1, 6));
  train->add_option("--split", forest.split, "Training fraction")->capture_default_str();
  train->add_option("--seed", forest.seed, "Seed for split and forest")->capture_default_str();
  train->add_option("--threads", forest.threads, "Tree-building threads (does not affect output)")->capture_default_str();
  train->add_option("-o,--output,--model-out", output, "Model JSON output")->required();
  train->add_option("--test-output", test_out, "Write the held-out records as JSON-lines");

  std::string model_path;
  auto* eval = app.add_subcommand("evaluate", "Evaluate a model on labelled records");
  eval->add_option("-m,--model", model_path, "Model file")->required();
  add_input(eval, in);
  eval->add_option("-o,--output", output, "Report JSON output");

  std::string csv_dir;
  std::size_t low_conf = 10;
  auto* analyze = app.add_subcommand("analyze", "Availability by quality-control group and yearly control share");
  add_input(analyze, in);
  analyze->add_option("-o,--output", output, "Report JSON output");
  analyze->add_option("--csv-dir", csv_dir, "Directory for CSV tables");
  analyze->add_option("--low-confidence", low_conf, "Years with fewer records are flagged")->capture_default_str();

  auto* pred = app.add_subcommand("predict", "Score and classify one JSON record read from stdin");
  pred->add_option("-m,--model", model_path, "Model file")->required();

  HarvestFlags hf;
  auto* harvest = app.add_subcommand("harvest", "Fetch records from a repository search API");
  harvest->add_option("--base-url", hf.config.base_url, "Search endpoint URL");
  harvest->add_option("--query", hf.config.query, "Search term");
  harvest->add_option("--page-size", hf.config.page_size, "Items per request")->capture_default_str()->check(CLI::PositiveNumber);
  harvest->add_option("--max-records", hf.config.max_records, "Stop after this many records")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  harvest->add_option("--retries", hf.config.retry_limit, "Retries per request on transient failure")->capture_default_str();
  harvest->add_option("--timeout", hf.timeout_s, "Request timeout in seconds")->capture_default_str();
  harvest->add_option("--backoff-ms", hf.backoff_ms, "Initial retry backoff")->capture_default_str();
  harvest->add_option("--mapping", hf.mapping, "Field mapping JSON");
  harvest->add_option("--transcript", hf.transcript, "Replay scripted responses instead of using the network");
  harvest->add_flag("--live", hf.live, "Allow network access");
  harvest->add_option("-o,--output", hf.output, "Canonical JSON-lines output");

  std::size_t synth_count = 2000;
  std::uint64_t synth_seed = 7;
  auto* synth = app.add_subcommand("synth", "Write a two-regime synthetic corpus");
  synth->add_option("--records", synth_count, "Record count")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("-o,--output", output, "JSON-lines output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*ingest) return cmd_ingest(in, output);
    if (*bench) {
      if (!paper && in.path.empty()) throw oerq::Error("benchmark needs --input or --paper");
      return cmd_benchmark(in, output, paper);
    }
    if (*score) return cmd_score(in, benchmark_source, output);
    if (*train) return cmd_train(in, benchmark_source, forest, output, test_out);
    if (*eval) return cmd_evaluate(model_path, in, output);
    if (*analyze) return cmd_analyze(in, output, csv_dir, low_conf);
    if (*pred) return cmd_predict(model_path);
    if (*harvest) return cmd_harvest(hf);
    if (*synth) return cmd_synth(synth_count, synth_seed, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
