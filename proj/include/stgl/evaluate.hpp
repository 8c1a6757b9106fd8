#pragma once

#include <vector>

#include "stgl/metrics.hpp"
#include "stgl/training.hpp"

namespace stgl {

struct EvalConfig {
  EvalSetting setting = EvalSetting::transductive;
  std::uint64_t seed = 0;
  int rank_negatives = 100;
  bool with_rank_metrics = true;
};

/// Walks the test interactions chronologically. Per positive: one uniform
/// negative feeds AP/AUC and `rank_negatives` feed Recall@K/MRR; inductive
/// mode keeps only edges with an inductive endpoint and draws negatives from
/// the inductive set. Memory-family scorers are replayed through train+val
/// first and commit each positive after scoring.
template <class Scorer>
MetricsReport evaluate(Scorer& scorer, const TemporalGraph& g, const SplitSpec& split,
                       const EvalConfig& cfg = {}) {
  const RunRng run_rng(cfg.seed);
  auto neg_rng = run_rng.stream("eval-negatives");

  if constexpr (Scorer::stateful) {
    scorer.reset_stream();
    for (EdgeId i = 0; i < split.val_end_idx; ++i) scorer.on_event(i);
  }

  std::vector<double> scores;
  std::vector<int> labels;
  double rr_sum = 0, r1_sum = 0, r5_sum = 0;
  std::int64_t n_eval = 0;

  for (EdgeId i = split.val_end_idx; i < g.num_edges(); ++i) {
    const Interaction& e = g.interactions()[static_cast<std::size_t>(i)];
    const bool inductive_edge = split.is_inductive(e.src) || split.is_inductive(e.dst);
    if (cfg.setting == EvalSetting::inductive && !inductive_edge) {
      if constexpr (Scorer::stateful) scorer.on_event(i);
      continue;
    }

    const auto draw_negative = [&]() {
      return cfg.setting == EvalSetting::inductive
                 ? sample_negative_inductive(neg_rng, split, e.dst)
                 : sample_negative(neg_rng, g, e.dst);
    };

    const double pos = static_cast<double>(scorer.logit({e.src, e.dst, e.timestamp, i}));
    const double neg =
        static_cast<double>(scorer.logit({e.src, draw_negative(), e.timestamp, -1}));
    scores.push_back(pos);
    labels.push_back(1);
    scores.push_back(neg);
    labels.push_back(0);

    if (cfg.with_rank_metrics) {
      std::vector<double> negs(static_cast<std::size_t>(cfg.rank_negatives));
      for (auto& s : negs)
        s = static_cast<double>(scorer.logit({e.src, draw_negative(), e.timestamp, -1}));
      const RankMetrics rm = rank_against_negatives(pos, negs);
      rr_sum += rm.reciprocal_rank;
      r1_sum += rm.recall_at_1;
      r5_sum += rm.recall_at_5;
    }
    ++n_eval;

    if constexpr (Scorer::stateful) scorer.on_event(i);
  }

  if (n_eval == 0) throw ValidationError("empty evaluation set");

  MetricsReport rep;
  rep.setting = cfg.setting;
  rep.n_eval = n_eval;
  rep.ap = average_precision(scores, labels);
  rep.auc = auc_roc(scores, labels);
  if (cfg.with_rank_metrics) {
    rep.mrr = rr_sum / static_cast<double>(n_eval);
    rep.recall_at[1] = r1_sum / static_cast<double>(n_eval);
    rep.recall_at[5] = r5_sum / static_cast<double>(n_eval);
  }
  return rep;
}

}  // namespace stgl
