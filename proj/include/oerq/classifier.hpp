#pragma once

// Random Forest over the six record features (availability score, normal
// score, level availability, description/title/subject lengths), predicting
// WithControl vs WithoutControl. Gini split criterion, bootstrap bagging,
// impurity-decrease feature importance.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/benchmark.hpp"
#include "oerq/error.hpp"
#include "oerq/metadata.hpp"
#include "oerq/random.hpp"
#include "oerq/scoring.hpp"

namespace oerq {

inline constexpr std::size_t kFeatureCount = 6;

enum class Feature : std::size_t {
  AvailabilityScore = 0,
  NormalScore,
  LevelAvailable,
  DescriptionLength,
  TitleLength,
  SubjectsLength,
};

inline constexpr std::array<Feature, kFeatureCount> kFeatures = {
    Feature::AvailabilityScore, Feature::NormalScore, Feature::LevelAvailable,
    Feature::DescriptionLength, Feature::TitleLength, Feature::SubjectsLength};

constexpr std::string_view feature_name(Feature f) {
  constexpr std::array<std::string_view, kFeatureCount> names = {
      "availability_score", "normal_score",  "level_available",
      "description_length", "title_length", "subjects_length"};
  return names[static_cast<std::size_t>(f)];
}

using FeatureRow = std::array<double, kFeatureCount>;

struct FeatureVector {
  double availability_score = 0.0;
  double normal_score = 0.0;
  int level_available = 0;
  std::size_t description_length = 0;
  std::size_t title_length = 0;
  std::size_t subjects_length = 0;

  FeatureRow row() const {
    return {availability_score,
            normal_score,
            static_cast<double>(level_available),
            static_cast<double>(description_length),
            static_cast<double>(title_length),
            static_cast<double>(subjects_length)};
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline FeatureVector extract_features(const OerRecord& r, const Benchmark& b) {
  FeatureVector v;
  v.availability_score = availability_score(r, b);
  v.normal_score = normal_score(r, b);
  v.level_available = static_cast<int>(boolean_rating(field_present(r, ScoredField::Level)));
  v.description_length = field_length(r, ScoredField::Description);
  v.title_length = field_length(r, ScoredField::Title);
  v.subjects_length = field_length(r, ScoredField::Subjects);
  return v;
}

// Class index 0 = WithControl, 1 = WithoutControl.
using ClassCounts = std::array<std::size_t, 2>;

inline constexpr std::array<QualityFlag, 2> kClassLabels = {QualityFlag::WithControl, QualityFlag::WithoutControl};

inline std::size_t class_index(QualityFlag q) {
  switch (q) {
    case QualityFlag::WithControl: return 0;
    case QualityFlag::WithoutControl: return 1;
    case QualityFlag::Unknown: break;
  }
  throw Error("Unknown quality flag cannot be used as a class label");
}

inline double gini_impurity(const ClassCounts& counts) {
  const auto total = counts[0] + counts[1];
  if (total == 0) throw ContractViolation("gini_impurity: empty node");
  const double p0 = static_cast<double>(counts[0]) / static_cast<double>(total);
  const double p1 = static_cast<double>(counts[1]) / static_cast<double>(total);
  return 1.0 - p0 * p0 - p1 * p1;
}

// Majority class; an exact tie goes to WithoutControl.
constexpr QualityFlag majority_label(const ClassCounts& counts) {
  return counts[0] > counts[1] ? QualityFlag::WithControl : QualityFlag::WithoutControl;
}

struct ForestHyperparams {
  std::size_t tree_count = 100;
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_samples_leaf = 1;
  std::size_t features_per_split = 2;
  std::uint64_t seed = 0;
  bool bootstrap = true;

  friend bool operator==(const ForestHyperparams&, const ForestHyperparams&) = default;
};

inline void validate(const ForestHyperparams& p) {
  if (p.tree_count == 0) throw Error("tree_count must be positive");
  if (p.max_depth && *p.max_depth == 0) throw Error("max_depth must be positive");
  if (p.min_samples_leaf == 0) throw Error("min_samples_leaf must be positive");
  if (p.features_per_split == 0 || p.features_per_split > kFeatureCount) {
    throw Error("features_per_split must be in [1, " + std::to_string(kFeatureCount) + "]");
  }
}

struct TreeNode {
  static constexpr std::int32_t kNone = -1;
  std::int32_t feature = kNone;  // kNone for a leaf
  double threshold = 0.0;        // go left when value <= threshold
  std::int32_t left = kNone;
  std::int32_t right = kNone;
  ClassCounts counts{};

  bool is_leaf() const { return feature == kNone; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Nodes in pre-order; nodes[0] is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(const FeatureRow& x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
      const auto& n = nodes[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i];
  }

  QualityFlag vote(const FeatureRow& x) const { return majority_label(leaf_for(x).counts); }

  std::size_t split_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestHyperparams hyperparams;
  std::array<double, kFeatureCount> feature_importance{};
  // False when no tree split at all; importances are then uniform.
  bool importance_defined = false;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

struct TrainOptions {
  unsigned threads = 1;
};

namespace detail {

// Exact split comparison. For a split with children (a_l, b_l, n_l) and
// (a_r, b_r, n_r), weighted child Gini times n equals n - S with
// S = (a_l^2 + b_l^2)/n_l + (a_r^2 + b_r^2)/n_r, so a better split has larger
// S. S is kept as the fraction num/den and compared by cross-multiplication
// so that equal-quality splits compare equal and the tie-break is exact.
__extension__ typedef unsigned __int128 SplitWide;

struct SplitScore {
  SplitWide num = 0;
  SplitWide den = 1;

  static SplitScore of(const ClassCounts& l, const ClassCounts& r) {
    const SplitWide nl = l[0] + l[1], nr = r[0] + r[1];
    const SplitWide sl = SplitWide(l[0]) * l[0] + SplitWide(l[1]) * l[1];
    const SplitWide sr = SplitWide(r[0]) * r[0] + SplitWide(r[1]) * r[1];
    return {sl * nr + sr * nl, nl * nr};
  }

  bool better_than(const SplitScore& o) const { return num * o.den > o.num * den; }
  bool same_as(const SplitScore& o) const { return num * o.den == o.num * den; }
};

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  SplitScore score;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const FeatureRow> rows, std::span<const std::uint8_t> labels, const ForestHyperparams& params,
              Rng& rng)
      : rows_(rows), labels_(labels), params_(params), rng_(rng) {}

  DecisionTree build(std::vector<std::uint32_t> samples, std::array<double, kFeatureCount>& decrease) {
    decrease_ = &decrease;
    root_size_ = static_cast<double>(samples.size());
    tree_.nodes.clear();
    grow(std::move(samples), 0);
    return std::move(tree_);
  }

 private:
  ClassCounts count(const std::vector<std::uint32_t>& samples) const {
    ClassCounts c{};
    for (auto s : samples) ++c[labels_[s]];
    return c;
  }

  std::int32_t grow(std::vector<std::uint32_t> samples, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    const ClassCounts counts = count(samples);
    tree_.nodes[id].counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_reached = params_.max_depth && depth >= *params_.max_depth;
    if (pure || depth_reached || samples.size() < 2 * params_.min_samples_leaf) return id;

    const auto split = choose_split(samples);
    if (!split) return id;

    std::vector<std::uint32_t> left, right;
    for (auto s : samples) {
      (rows_[s][split->feature] <= split->threshold ? left : right).push_back(s);
    }
    const ClassCounts lc = count(left), rc = count(right);
    const double n = static_cast<double>(samples.size());
    const double nl = static_cast<double>(left.size()), nr = static_cast<double>(right.size());
    const double gain = n * gini_impurity(counts) - nl * gini_impurity(lc) - nr * gini_impurity(rc);
    (*decrease_)[split->feature] += std::max(0.0, gain) / root_size_;

    samples.clear();
    samples.shrink_to_fit();
    tree_.nodes[id].feature = static_cast<std::int32_t>(split->feature);
    tree_.nodes[id].threshold = split->threshold;
    const auto l = grow(std::move(left), depth + 1);
    const auto r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  // Visits features in a random order, skipping those constant within the
  // node, until features_per_split candidates have been evaluated.
  std::optional<SplitChoice> choose_split(const std::vector<std::uint32_t>& samples) {
    std::array<std::size_t, kFeatureCount> order{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) order[i] = i;

    std::optional<SplitChoice> best;
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < kFeatureCount && evaluated < params_.features_per_split; ++i) {
      std::swap(order[i], order[i + rng_.below(kFeatureCount - i)]);
      const std::size_t f = order[i];
      if (is_constant(samples, f)) continue;
      ++evaluated;
      auto candidate = best_threshold(samples, f);
      if (!candidate) continue;
      if (!best || candidate->score.better_than(best->score) ||
          (candidate->score.same_as(best->score) &&
           (f < best->feature || (f == best->feature && candidate->threshold < best->threshold)))) {
        best = candidate;
      }
    }
    return best;
  }

  bool is_constant(const std::vector<std::uint32_t>& samples, std::size_t f) const {
    const double v = rows_[samples.front()][f];
    return std::all_of(samples.begin(), samples.end(), [&](auto s) { return rows_[s][f] == v; });
  }

  std::optional<SplitChoice> best_threshold(const std::vector<std::uint32_t>& samples, std::size_t f) const {
    std::vector<std::pair<double, std::uint8_t>> sorted;
    sorted.reserve(samples.size());
    for (auto s : samples) sorted.emplace_back(rows_[s][f], labels_[s]);
    std::sort(sorted.begin(), sorted.end());

    ClassCounts total{};
    for (const auto& [v, y] : sorted) ++total[y];
    ClassCounts left{};
    std::optional<SplitChoice> best;
    const std::size_t min_leaf = params_.min_samples_leaf;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      ++left[sorted[i].second];
      const double lo = sorted[i].first, hi = sorted[i + 1].first;
      if (lo == hi) continue;
      const std::size_t nl = i + 1, nr = sorted.size() - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const ClassCounts right = {total[0] - left[0], total[1] - left[1]};
      const auto score = SplitScore::of(left, right);
      // Thresholds ascend along the sweep, so only a strictly better score replaces.
      if (!best || score.better_than(best->score)) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best = SplitChoice{f, mid, score};
      }
    }
    return best;
  }

  std::span<const FeatureRow> rows_;
  std::span<const std::uint8_t> labels_;
  const ForestHyperparams& params_;
  Rng& rng_;
  DecisionTree tree_;
  std::array<double, kFeatureCount>* decrease_ = nullptr;
  double root_size_ = 1.0;
};

}  // namespace detail

// Per-tree random stream: seed xor tree index.
inline Rng tree_rng(std::uint64_t seed, std::size_t tree_index) { return Rng(seed ^ static_cast<std::uint64_t>(tree_index)); }

inline std::vector<std::uint32_t> bootstrap_sample(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> out(n);
  for (auto& s : out) s = static_cast<std::uint32_t>(rng.below(n));
  return out;
}

inline ForestModel train_forest(std::span<const FeatureRow> rows, std::span<const QualityFlag> labels,
                                const ForestHyperparams& params, const TrainOptions& options = {}) {
  validate(params);
  if (rows.size() != labels.size()) throw Error("feature and label counts differ");
  if (rows.size() < 2) throw Error("degenerate training set: need at least 2 samples");
  if (rows.size() > UINT32_MAX) throw Error("training set too large");

  std::vector<std::uint8_t> y(labels.size());
  ClassCounts totals{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y[i] = static_cast<std::uint8_t>(class_index(labels[i]));
    ++totals[y[i]];
  }
  if (totals[0] == 0 || totals[1] == 0) throw Error("degenerate training set: only one class present");

  ForestModel model;
  model.hyperparams = params;
  model.trees.resize(params.tree_count);
  std::vector<std::array<double, kFeatureCount>> decrease(params.tree_count);

  auto build_tree = [&](std::size_t t) {
    Rng rng = tree_rng(params.seed, t);
    std::vector<std::uint32_t> samples;
    if (params.bootstrap) {
      samples = bootstrap_sample(rows.size(), rng);
    } else {
      samples.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) samples[i] = static_cast<std::uint32_t>(i);
    }
    decrease[t].fill(0.0);
    detail::TreeBuilder builder(rows, y, params, rng);
    model.trees[t] = builder.build(std::move(samples), decrease[t]);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(params.tree_count)));
  if (workers == 1) {
    for (std::size_t t = 0; t < params.tree_count; ++t) build_tree(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < params.tree_count; t = next++) build_tree(t);
      });
    }
  }

  // Summed in tree order so the result does not depend on scheduling.
  std::array<double, kFeatureCount> total{};
  for (const auto& d : decrease) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) total[f] += d[f];
  }
  double sum = 0.0;
  for (double v : total) sum += v;
  model.importance_defined = sum > 0.0;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    model.feature_importance[f] = model.importance_defined ? total[f] / sum : 1.0 / kFeatureCount;
  }
  return model;
}

inline ForestModel train_forest(const std::vector<FeatureVector>& features, const std::vector<QualityFlag>& labels,
                                const ForestHyperparams& params, const TrainOptions& options = {}) {
  std::vector<FeatureRow> rows;
  rows.reserve(features.size());
  for (const auto& f : features) rows.push_back(f.row());
  return train_forest(std::span<const FeatureRow>(rows), std::span<const QualityFlag>(labels), params, options);
}

struct Prediction {
  QualityFlag label = QualityFlag::WithoutControl;
  double vote_fraction = 0.0;
};

inline Prediction predict(const ForestModel& model, const FeatureRow& x) {
  if (model.trees.empty()) throw ContractViolation("predict: model has no trees");
  std::size_t with_control = 0;
  for (const auto& t : model.trees) {
    if (t.vote(x) == QualityFlag::WithControl) ++with_control;
  }
  const std::size_t n = model.trees.size();
  const std::size_t without_control = n - with_control;
  Prediction p;
  p.label = with_control > without_control ? QualityFlag::WithControl : QualityFlag::WithoutControl;
  p.vote_fraction = static_cast<double>(std::max(with_control, without_control)) / static_cast<double>(n);
  return p;
}

inline Prediction predict(const ForestModel& model, const FeatureVector& x) { return predict(model, x.row()); }

struct ImportanceRanking {
  std::vector<std::pair<Feature, double>> entries;  // descending
  bool warning_no_splits = false;
};

inline ImportanceRanking feature_importance(const ForestModel& model) {
  ImportanceRanking out;
  out.warning_no_splits = !model.importance_defined;
  for (auto f : kFeatures) out.entries.emplace_back(f, model.feature_importance[static_cast<std::size_t>(f)]);
  std::stable_sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// ---- model file -----------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

inline json to_json(const ForestHyperparams& p) {
  return {{"tree_count", p.tree_count},
          {"max_depth", p.max_depth ? json(*p.max_depth) : json(nullptr)},
          {"min_samples_leaf", p.min_samples_leaf},
          {"features_per_split", p.features_per_split},
          {"seed", p.seed},
          {"bootstrap", p.bootstrap}};
}

inline ForestHyperparams hyperparams_from_json(const json& j) {
  ForestHyperparams p;
  p.tree_count = j.at("tree_count").get<std::size_t>();
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::size_t>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.features_per_split = j.at("features_per_split").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.bootstrap = j.value("bootstrap", true);
  validate(p);
  return p;
}

namespace detail {

inline json node_to_json(const DecisionTree& tree, std::size_t i) {
  const auto& n = tree.nodes[i];
  if (n.is_leaf()) return {{"counts", {n.counts[0], n.counts[1]}}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"left", node_to_json(tree, static_cast<std::size_t>(n.left))},
          {"right", node_to_json(tree, static_cast<std::size_t>(n.right))}};
}

inline std::int32_t node_from_json(const json& j, DecisionTree& tree) {
  const auto id = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{});
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    tree.nodes[id].counts = {c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()};
    return id;
  }
  const auto feature = j.at("feature").get<std::int32_t>();
  if (feature < 0 || feature >= static_cast<std::int32_t>(kFeatureCount)) throw Error("model node has invalid feature index");
  tree.nodes[id].feature = feature;
  tree.nodes[id].threshold = j.at("threshold").get<double>();
  const auto l = node_from_json(j.at("left"), tree);
  const auto r = node_from_json(j.at("right"), tree);
  tree.nodes[id].left = l;
  tree.nodes[id].right = r;
  return id;
}

}  // namespace detail

inline json to_json(const ForestModel& m) {
  json j = json::object();
  j["version"] = kModelFormatVersion;
  j["hyperparams"] = to_json(m.hyperparams);
  j["class_labels"] = {std::string(quality_flag_label(kClassLabels[0])), std::string(quality_flag_label(kClassLabels[1]))};
  json order = json::array();
  json importance = json::object();
  for (auto f : kFeatures) {
    order.push_back(std::string(feature_name(f)));
    importance[std::string(feature_name(f))] = m.feature_importance[static_cast<std::size_t>(f)];
  }
  j["feature_order"] = std::move(order);
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(detail::node_to_json(t, 0));
  j["trees"] = std::move(trees);
  j["feature_importance"] = std::move(importance);
  j["importance_defined"] = m.importance_defined;
  return j;
}

inline ForestModel forest_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) throw Error("unsupported model version");
    const auto& order = j.at("feature_order");
    if (order.size() != kFeatureCount) throw Error("model feature_order has wrong length");
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (order[i].get<std::string>() != feature_name(kFeatures[i])) throw Error("model feature_order mismatch");
    }
    ForestModel m;
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    for (const auto& t : j.at("trees")) {
      DecisionTree tree;
      detail::node_from_json(t, tree);
      m.trees.push_back(std::move(tree));
    }
    if (m.trees.empty()) throw Error("model has no trees");
    for (auto f : kFeatures) {
      m.feature_importance[static_cast<std::size_t>(f)] = j.at("feature_importance").at(std::string(feature_name(f))).get<double>();
    }
    m.importance_defined = j.value("importance_defined", true);
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace oerq
