#include "stgl/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace stgl {

namespace {

void check_two_classes(std::span<const int> labels) {
  bool pos = false, neg = false;
  for (int l : labels) (l != 0 ? pos : neg) = true;
  if (!pos || !neg) throw ValidationError("metric needs both classes present");
}

}  // namespace

double average_precision(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores/labels size mismatch");
  check_two_classes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double n_pos = static_cast<double>(std::count_if(
      labels.begin(), labels.end(), [](int l) { return l != 0; }));
  double hits = 0;
  double ap = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] != 0) {
      hits += 1;
      const double precision = hits / static_cast<double>(k + 1);
      ap += precision / n_pos;  // recall increments by 1/n_pos at each hit
    }
  }
  return ap;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores/labels size mismatch");
  check_two_classes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Rank sum with average ranks over tied blocks.
  double pos_rank_sum = 0;
  std::size_t n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      } else {
        ++n_neg;
      }
    }
    i = j;
  }
  const double u = pos_rank_sum - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1) / 2;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

RankMetrics rank_against_negatives(double pos_score, std::span<const double> neg_scores) {
  double above = 0, tied = 0;
  for (double s : neg_scores) {
    if (s > pos_score) above += 1;
    else if (s == pos_score) tied += 1;
  }
  RankMetrics m;
  m.rank = 1.0 + above + 0.5 * tied;
  m.recall_at_1 = m.rank <= 1.0 ? 1 : 0;
  m.recall_at_5 = m.rank <= 5.0 ? 1 : 0;
  m.reciprocal_rank = 1.0 / m.rank;
  return m;
}

}  // namespace stgl
