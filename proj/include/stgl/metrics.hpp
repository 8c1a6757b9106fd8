#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "stgl/common.hpp"

namespace stgl {

enum class EvalSetting { transductive, inductive };

inline const char* to_string(EvalSetting s) {
  return s == EvalSetting::transductive ? "transductive" : "inductive";
}

struct MetricsReport {
  double ap = 0;
  double auc = 0;
  std::map<int, double> recall_at;  // K -> value
  double mrr = 0;
  EvalSetting setting = EvalSetting::transductive;
  std::int64_t n_eval = 0;
};

/// Area under the precision-recall curve via the step-wise sum
/// AP = sum_k (R_k - R_{k-1}) P_k over the score-sorted sequence; ties keep
/// their stable input order. Throws on single-class input.
double average_precision(std::span<const double> scores, std::span<const int> labels);

/// Mann-Whitney statistic: P(score+ > score-) + 1/2 P(tie), by rank-sum.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

struct RankMetrics {
  double rank = 0;  // 1 + #{neg > pos} + 1/2 #{neg == pos}
  int recall_at_1 = 0;
  int recall_at_5 = 0;
  double reciprocal_rank = 0;
};

/// Rank of the positive among its sampled negatives; ties count half a rank.
RankMetrics rank_against_negatives(double pos_score, std::span<const double> neg_scores);

}  // namespace stgl
