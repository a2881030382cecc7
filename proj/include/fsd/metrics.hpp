#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsd/labels.hpp"
#include "fsd/util.hpp"

namespace fsd {

// Positive class is spammer throughout.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fn + fp + tn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fn += o.fn;
    fp += o.fp;
    tn += o.tn;
    return *this;
  }
};

inline ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truth) {
  if (predictions.size() != truth.size())
    throw std::invalid_argument("confusion: prediction/truth length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred_spam = predictions[i] == Label::spam;
    const bool is_spam = truth[i] == Label::spam;
    if (is_spam)
      (pred_spam ? cm.tp : cm.fn) += 1;
    else
      (pred_spam ? cm.fp : cm.tn) += 1;
  }
  return cm;
}

// Per-class true/false positive rates in the row convention of the reports:
// each class's false-positive rate is the complement of its true-positive
// rate.
struct PerClassRates {
  double spammer_tp_rate = 0;
  double spammer_fp_rate = 0;
  double legit_tp_rate = 0;
  double legit_fp_rate = 0;
};

inline PerClassRates per_class_rates(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) throw std::invalid_argument("per_class_rates: no spammer rows");
  if (cm.tn + cm.fp == 0) throw std::invalid_argument("per_class_rates: no legitimate rows");
  PerClassRates r;
  r.spammer_tp_rate = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  r.legit_tp_rate = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  r.spammer_fp_rate = 1.0 - r.spammer_tp_rate;
  r.legit_fp_rate = 1.0 - r.legit_tp_rate;
  return r;
}

inline double recall(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) throw std::invalid_argument("recall: no positive rows");
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

inline double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("accuracy: empty matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), from (0,0) to (1,1)
  double auc = 0;
};

// Threshold sweep over the distinct score values, ties grouped into a single
// step, area by the trapezoid rule.
inline RocCurve roc_auc(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size())
    throw std::invalid_argument("roc_auc: score/truth length mismatch");
  std::int64_t n_pos = 0, n_neg = 0;
  for (Label l : truth) (l == Label::spam ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc_auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::int64_t tp = 0, fp = 0;
  double auc = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (truth[order[i]] == Label::spam)
        ++tp;
      else
        ++fp;
      ++i;
    }
    const double x = static_cast<double>(fp) / static_cast<double>(n_neg);
    const double y = static_cast<double>(tp) / static_cast<double>(n_pos);
    const auto& prev = curve.points.back();
    auc += (x - prev.first) * (y + prev.second) / 2.0;
    curve.points.emplace_back(x, y);
  }
  curve.auc = auc;
  return curve;
}

// Published comparison figures for the PageRank-style ranking baseline,
// shown in reports for side-by-side reading. Never recomputed here.
struct ReferenceResults {
  static constexpr double collusionrank_spammer_tp = 0.940;
  static constexpr double collusionrank_spammer_fp = 0.060;
  static constexpr double collusionrank_legit_tp = 0.901;
  static constexpr double collusionrank_legit_fp = 0.099;
  static constexpr double collusionrank_auc = 0.92;
};

inline std::string format_percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", rate * 100.0);
  return buf;
}

}  // namespace fsd
