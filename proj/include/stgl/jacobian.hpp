#pragma once

#include "stgl/analysis.hpp"
#include "stgl/training.hpp"

namespace stgl {

/// Stacks per-example gradients of the link logit at the scorer's current
/// (untrained) parameters: the last n_sub/2 positive training links, each
/// paired with one uniform negative, rows alternating y = +1 / -1. 64-bit
/// scorers only.
template <class Scorer>
JacobianMatrix compute_jacobian(Scorer& scorer, const TemporalGraph& g, const SplitSpec& split,
                                Eigen::Index n_sub, std::uint64_t seed) {
  static_assert(std::is_same_v<typename Scorer::Scalar, double>,
                "the Jacobian is computed in 64-bit arithmetic");
  Eigen::Index n_pos = n_sub / 2;
  if (n_pos < 1) throw ValidationError("need at least 2 Jacobian rows");
  n_pos = std::min<Eigen::Index>(n_pos, split.train_end_idx);
  const EdgeId first = split.train_end_idx - n_pos;

  JacobianMatrix jac;
  jac.j.resize(2 * n_pos, scorer.param_count());
  jac.y.resize(2 * n_pos);

  auto neg_rng = RunRng(seed).stream("fla-negatives");
  if constexpr (Scorer::stateful) {
    scorer.reset_stream();
    for (EdgeId i = 0; i < first; ++i) scorer.on_event(i);
  }

  VecXd grad(scorer.param_count());
  Eigen::Index row = 0;
  for (EdgeId i = first; i < split.train_end_idx; ++i) {
    const Interaction& e = g.interactions()[static_cast<std::size_t>(i)];
    scorer.logit_with_grad({e.src, e.dst, e.timestamp, i}, grad);
    jac.j.row(row) = grad.transpose();
    jac.y[row++] = 1.0;
    const NodeId neg = sample_negative(neg_rng, g, e.dst);
    scorer.logit_with_grad({e.src, neg, e.timestamp, -1}, grad);
    jac.j.row(row) = grad.transpose();
    jac.y[row++] = -1.0;
    if constexpr (Scorer::stateful) scorer.on_event(i);
  }
  return jac;
}

}  // namespace stgl
