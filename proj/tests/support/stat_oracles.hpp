#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "navsynth/stats.hpp"

namespace navsynth::testing {

// Average rank by counting: rank(x) = #{y < x} + (#{y == x} + 1) / 2.
inline std::vector<double> counting_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0;
    double equal = 0;
    for (double y : v) {
      if (y < v[i]) ++less;
      if (y == v[i]) ++equal;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double naive_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = counting_ranks(x);
  const auto ry = counting_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Direct tally over (label, predicted, actual) triples.
inline F1Scores tally_f1(const std::vector<BinaryDecision>& d, std::size_t labels) {
  double tp_all = 0;
  double fp_all = 0;
  double fn_all = 0;
  double macro = 0;
  for (std::size_t l = 0; l < labels; ++l) {
    double tp = 0;
    double fp = 0;
    double fn = 0;
    for (const auto& x : d) {
      if (x.label != l) continue;
      tp += x.predicted && x.actual;
      fp += x.predicted && !x.actual;
      fn += !x.predicted && x.actual;
    }
    const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    macro += precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
  }
  const double p = tp_all + fp_all > 0 ? tp_all / (tp_all + fp_all) : 0.0;
  const double r = tp_all + fn_all > 0 ? tp_all / (tp_all + fn_all) : 0.0;
  return {p + r > 0 ? 2 * p * r / (p + r) : 0.0, macro / static_cast<double>(labels)};
}

}  // namespace navsynth::testing
