#pragma once

#include <ostream>
#include <string>

#include "fsd/classifier.hpp"
#include "fsd/metrics.hpp"
#include "fsd/util.hpp"

namespace fsd {

// Evaluation report in the per-class row layout used throughout the
// result tables, with the published ranking-baseline figures alongside.
// Deliberately free of timestamps so identical runs emit identical bytes.
inline void write_report(std::ostream& out, const FeatureTable& table, const CvParams& params,
                         const CvResult& cv, const RocCurve& roc) {
  const PerClassRates rates = per_class_rates(cv.pooled);
  out << "# evaluation report\n";
  out << "mode: " << mode_name(table.mode) << "\n";
  out << "algo: " << algo_name(params.algo) << "\n";
  out << "folds: " << params.folds << "\n";
  out << "seed: " << params.seed << "\n";
  out << "rows: " << table.rows.size() << "\n";
  out << "\n";
  out << "pooled confusion (positive = spammer)\n";
  out << "  tp " << cv.pooled.tp << "  fn " << cv.pooled.fn << "  fp " << cv.pooled.fp << "  tn "
      << cv.pooled.tn << "\n";
  out << "\n";
  out << "per-class rates\n";
  out << "  spammer          true_positive " << format_percent(rates.spammer_tp_rate)
      << "  false_positive " << format_percent(rates.spammer_fp_rate) << "\n";
  out << "  legitimate user  true_positive " << format_percent(rates.legit_tp_rate)
      << "  false_positive " << format_percent(rates.legit_fp_rate) << "\n";
  out << "\n";
  out << "recall: " << fmt_double(recall(cv.pooled)) << "\n";
  out << "accuracy: " << fmt_double(accuracy(cv.pooled)) << "\n";
  out << "auc: " << fmt_double(roc.auc) << "\n";
  out << "\n";
  out << "reference: collusionrank (reported figures, not recomputed)\n";
  out << "  spammer          true_positive "
      << format_percent(ReferenceResults::collusionrank_spammer_tp) << "  false_positive "
      << format_percent(ReferenceResults::collusionrank_spammer_fp) << "\n";
  out << "  legitimate user  true_positive "
      << format_percent(ReferenceResults::collusionrank_legit_tp) << "  false_positive "
      << format_percent(ReferenceResults::collusionrank_legit_fp) << "\n";
  out << "  auc ~" << fmt_double(ReferenceResults::collusionrank_auc) << "\n";
  out << "\n";
  out << "per-fold confusion\n";
  for (std::size_t f = 0; f < cv.fold_cms.size(); ++f) {
    const auto& cm = cv.fold_cms[f];
    out << "  fold " << f << ": tp " << cm.tp << "  fn " << cm.fn << "  fp " << cm.fp << "  tn "
        << cm.tn << "\n";
  }
  out << "\n";
  out << "roc points: " << roc.points.size() << "\n";
}

// ROC plot data: one "fpr,tpr" pair per line.
inline void write_roc_points(std::ostream& out, const RocCurve& roc) {
  out << "fpr,tpr\n";
  for (const auto& [x, y] : roc.points) out << fmt_double(x) << ',' << fmt_double(y) << '\n';
}

}  // namespace fsd
