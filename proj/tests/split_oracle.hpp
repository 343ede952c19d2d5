#pragma once

// Exhaustive threshold search on 1-D data with exact rational Gini arithmetic.
// Independent of the forest code: it recounts both sides for every candidate
// threshold and evaluates the textbook weighted-impurity formula.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

namespace oerq::testing {

using Rational = boost::rational<std::int64_t>;

struct Point1D {
  double x;
  int label;  // 0 = with control, 1 = without control
};

struct StumpOracle {
  std::optional<double> threshold;  // nullopt = root stays a leaf
  int left_label = 1;
  int right_label = 1;

  int predict(double x) const {
    if (!threshold) return left_label;
    return x <= *threshold ? left_label : right_label;
  }
};

inline Rational gini_rational(std::int64_t a, std::int64_t b) {
  const std::int64_t n = a + b;
  const Rational pa(a, n), pb(b, n);
  return Rational(1) - pa * pa - pb * pb;
}

inline int majority(std::int64_t a, std::int64_t b) { return a > b ? 0 : 1; }

inline StumpOracle exhaustive_stump(const std::vector<Point1D>& pts) {
  std::int64_t a = 0, b = 0;
  for (const auto& p : pts) (p.label == 0 ? a : b)++;
  StumpOracle out;
  out.left_label = out.right_label = majority(a, b);
  if (a == 0 || b == 0) return out;

  std::vector<double> xs;
  for (const auto& p : pts) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const std::int64_t n = a + b;
  std::optional<Rational> best;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double t = xs[i] + (xs[i + 1] - xs[i]) / 2.0;
    std::int64_t la = 0, lb = 0, ra = 0, rb = 0;
    for (const auto& p : pts) {
      if (p.x <= t) {
        (p.label == 0 ? la : lb)++;
      } else {
        (p.label == 0 ? ra : rb)++;
      }
    }
    const Rational weighted = Rational(la + lb, n) * gini_rational(la, lb) + Rational(ra + rb, n) * gini_rational(ra, rb);
    if (!best || weighted < *best) {
      best = weighted;
      out.threshold = t;
      out.left_label = majority(la, lb);
      out.right_label = majority(ra, rb);
    }
  }
  return out;
}

}  // namespace oerq::testing
