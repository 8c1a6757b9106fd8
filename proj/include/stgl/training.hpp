#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "stgl/graph.hpp"
#include "stgl/metrics.hpp"
#include "stgl/rng.hpp"
#include "stgl/scorers.hpp"

namespace stgl {

enum class OptimizerKind { sgd, adam };
enum class LossKind { logistic, bce };

struct TrainConfig {
  double lr = 1e-4;
  double weight_decay = 1e-6;
  int batch_size = 600;
  int max_epochs = 100;
  int patience = 20;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;
  LossKind loss = LossKind::bce;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const {
    if (lr <= 0) throw ValidationError("learning rate must be positive");
    if (patience < 1) throw ValidationError("patience must be >= 1");
    if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  }
};

struct TrainHistory {
  std::vector<double> train_ap;
  std::vector<double> val_ap;
  std::vector<double> loss;
  std::vector<double> seconds;

  std::size_t epochs() const { return train_ap.size(); }
};

/// Uniform over destination nodes != exclude. When the destination universe
/// holds nothing but `exclude` (degenerate toy graphs), falls back to all
/// node ids != exclude.
inline NodeId sample_negative(std::mt19937_64& rng, const TemporalGraph& g, NodeId exclude) {
  const auto& pool = g.destination_nodes();
  const bool excluded_in_pool = std::binary_search(pool.begin(), pool.end(), exclude);
  const std::size_t eligible = pool.size() - (excluded_in_pool ? 1 : 0);
  if (eligible == 0) {
    const NodeId n = g.num_nodes();
    if (n < 2) throw ValidationError("no eligible negative node");
    std::uniform_int_distribution<NodeId> pick(0, n - 2);
    const NodeId v = pick(rng);
    return v >= exclude ? v + 1 : v;
  }
  std::uniform_int_distribution<std::size_t> pick(0, eligible - 1);
  std::size_t i = pick(rng);
  if (excluded_in_pool) {
    const std::size_t ex_pos = static_cast<std::size_t>(
        std::lower_bound(pool.begin(), pool.end(), exclude) - pool.begin());
    if (i >= ex_pos) ++i;
  }
  return pool[i];
}

/// Inductive protocol: negatives only from the inductive node set.
inline NodeId sample_negative_inductive(std::mt19937_64& rng, const SplitSpec& split,
                                        NodeId exclude) {
  const auto& pool = split.inductive_nodes;
  const bool excluded_in_pool =
      std::binary_search(pool.begin(), pool.end(), exclude);
  const std::size_t eligible = pool.size() - (excluded_in_pool ? 1 : 0);
  if (eligible == 0) throw ValidationError("no eligible inductive negative");
  std::uniform_int_distribution<std::size_t> pick(0, eligible - 1);
  std::size_t i = pick(rng);
  if (excluded_in_pool) {
    const std::size_t ex_pos = static_cast<std::size_t>(
        std::lower_bound(pool.begin(), pool.end(), exclude) - pool.begin());
    if (i >= ex_pos) ++i;
  }
  return pool[i];
}

template <typename S>
class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, Eigen::Index dim) : cfg_(cfg) {
    if (cfg.optimizer == OptimizerKind::adam) {
      m_ = VecX<S>::Zero(dim);
      v_ = VecX<S>::Zero(dim);
    }
  }

  void step(VecX<S>& params, const VecX<S>& grad) {
    const S lr = static_cast<S>(cfg_.lr);
    VecX<S> g = grad;
    if (cfg_.weight_decay > 0) g += static_cast<S>(cfg_.weight_decay) * params;
    if (cfg_.optimizer == OptimizerKind::sgd) {
      params -= lr * g;
      return;
    }
    ++t_;
    const S b1 = static_cast<S>(cfg_.adam_beta1);
    const S b2 = static_cast<S>(cfg_.adam_beta2);
    m_ = b1 * m_ + (S(1) - b1) * g;
    v_ = (b2 * v_.array() + (S(1) - b2) * g.array().square()).matrix();
    const S corr1 = S(1) - std::pow(b1, static_cast<S>(t_));
    const S corr2 = S(1) - std::pow(b2, static_cast<S>(t_));
    params.array() -=
        lr * (m_.array() / corr1) /
        ((v_.array() / corr2).sqrt() + static_cast<S>(cfg_.adam_eps));
  }

 private:
  TrainConfig cfg_;
  VecX<S> m_, v_;
  long t_ = 0;
};

namespace detail {

/// Scores a span of candidate links and accumulates the mean loss gradient.
/// Slices run on a fixed number of worker threads; per-slice partial sums
/// reduce in slice order, so the result is independent of scheduling.
template <class Scorer>
double batch_loss_and_grad(Scorer& scorer, std::span<const LinkRef> links,
                           std::span<const int> labels, VecX<typename Scorer::Scalar>& grad_out,
                           std::vector<double>* scores_out) {
  using S = typename Scorer::Scalar;
  const std::size_t n = links.size();
  // Fixed slice count: the reduction order (and so the result) does not
  // depend on the machine's core count.
  const std::size_t workers = std::min<std::size_t>(4, std::max<std::size_t>(n / 32, 1));

  std::vector<VecX<S>> grads(workers, VecX<S>::Zero(scorer.param_count()));
  std::vector<double> losses(workers, 0.0);
  std::vector<double> scores(n, 0.0);

  const auto slice = [&](std::size_t w) {
    VecX<S> grad(scorer.param_count());
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    for (std::size_t i = lo; i < hi; ++i) {
      const double z = static_cast<double>(scorer.logit_with_grad(links[i], grad));
      const double y = labels[i] != 0 ? 1.0 : 0.0;
      const double p = 1.0 / (1.0 + std::exp(-z));
      // Numerically stable BCE-with-logits.
      losses[w] += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
      grads[w] += static_cast<S>(p - y) * grad;
      scores[i] = z;
    }
  };

  if (workers == 1) {
    slice(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(slice, w);
    slice(0);
    for (auto& t : pool) t.join();
  }

  grad_out = VecX<S>::Zero(scorer.param_count());
  double loss_sum = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    grad_out += grads[w];
    loss_sum += losses[w];
  }
  grad_out /= static_cast<S>(n);
  if (scores_out) scores_out->insert(scores_out->end(), scores.begin(), scores.end());
  return loss_sum / static_cast<double>(n);
}

/// AP over a contiguous interaction range with one sampled negative per
/// positive. Stateful scorers must already be replayed up to `from`; they
/// commit each positive after scoring.
template <class Scorer>
double range_ap(Scorer& scorer, const TemporalGraph& g, EdgeId from, EdgeId to,
                std::mt19937_64& neg_rng) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (EdgeId i = from; i < to; ++i) {
    const Interaction& e = g.interactions()[static_cast<std::size_t>(i)];
    const NodeId neg = sample_negative(neg_rng, g, e.dst);
    scores.push_back(static_cast<double>(scorer.logit({e.src, e.dst, e.timestamp, i})));
    labels.push_back(1);
    scores.push_back(static_cast<double>(scorer.logit({e.src, neg, e.timestamp, -1})));
    labels.push_back(0);
    if constexpr (Scorer::stateful) scorer.on_event(i);
  }
  return average_precision(scores, labels);
}

}  // namespace detail

template <typename S>
struct TrainResult {
  VecX<S> best_params;
  TrainHistory history;
  int best_epoch = -1;
  double best_val_ap = 0;
};

/// Mini-batch link-prediction training: chronological batches, one sampled
/// negative per positive, BCE on classifier logits, early stopping on
/// validation AP. Memory-family scorers rebuild their state by replaying the
/// stream each epoch. Returns the best-validation parameters.
template <class Scorer>
TrainResult<typename Scorer::Scalar> train_link_prediction(Scorer& scorer, const TemporalGraph& g,
                                                           const SplitSpec& split,
                                                           const TrainConfig& cfg) {
  using S = typename Scorer::Scalar;
  cfg.validate();
  if (split.train_end_idx <= 0) throw ValidationError("empty train split");

  const RunRng run_rng(cfg.seed);
  TrainResult<S> result;
  result.best_params = scorer.params_flat();
  if (cfg.max_epochs == 0) return result;

  Optimizer<S> opt(cfg, scorer.param_count());
  VecX<S> params = scorer.params_flat();
  int epochs_since_best = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    auto neg_rng = run_rng.stream("train-negatives", static_cast<std::uint64_t>(epoch));
    if constexpr (Scorer::stateful) scorer.reset_stream();

    std::vector<double> epoch_scores;
    std::vector<int> epoch_labels;
    double epoch_loss = 0;
    EdgeId batches = 0;

    for (EdgeId start = 0; start < split.train_end_idx; start += cfg.batch_size) {
      const EdgeId end = std::min<EdgeId>(start + cfg.batch_size, split.train_end_idx);
      std::vector<LinkRef> links;
      std::vector<int> labels;
      links.reserve(2 * static_cast<std::size_t>(end - start));
      for (EdgeId i = start; i < end; ++i) {
        const Interaction& e = g.interactions()[static_cast<std::size_t>(i)];
        links.push_back({e.src, e.dst, e.timestamp, i});
        labels.push_back(1);
        links.push_back({e.src, sample_negative(neg_rng, g, e.dst), e.timestamp, -1});
        labels.push_back(0);
      }

      VecX<S> grad;
      std::vector<double> scores;
      scores.reserve(links.size());
      epoch_loss += detail::batch_loss_and_grad(scorer, links, labels, grad, &scores);
      ++batches;
      epoch_scores.insert(epoch_scores.end(), scores.begin(), scores.end());
      epoch_labels.insert(epoch_labels.end(), labels.begin(), labels.end());

      opt.step(params, grad);
      scorer.set_params_flat(params);

      if constexpr (Scorer::stateful)
        for (EdgeId i = start; i < end; ++i) scorer.on_event(i);
    }

    const double train_ap = average_precision(epoch_scores, epoch_labels);
    auto val_rng = run_rng.stream("val-negatives");
    const double val_ap =
        detail::range_ap(scorer, g, split.train_end_idx, split.val_end_idx, val_rng);

    const auto t1 = std::chrono::steady_clock::now();
    result.history.train_ap.push_back(train_ap);
    result.history.val_ap.push_back(val_ap);
    result.history.loss.push_back(epoch_loss / static_cast<double>(std::max<EdgeId>(batches, 1)));
    result.history.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

    if (val_ap > result.best_val_ap || result.best_epoch < 0) {
      result.best_val_ap = val_ap;
      result.best_epoch = epoch;
      result.best_params = params;
      epochs_since_best = 0;
    } else if (++epochs_since_best >= cfg.patience) {
      break;
    }
  }

  scorer.set_params_flat(result.best_params);
  return result;
}

template <typename S>
struct OnlineSgdResult {
  std::vector<VecX<S>> trajectory;  // theta_0 .. theta_{N-1}
  VecX<S> sampled;                  // theta~ drawn uniformly from the trajectory
  std::size_t sampled_index = 0;
  std::size_t grad_evals = 0;
};

/// Single-example SGD on the +-1 logistic loss psi(x) = log(1 + e^{-x});
/// exactly one gradient evaluation per iteration. The model ends at the
/// uniformly sampled trajectory point.
template <class Model>
OnlineSgdResult<typename Model::Scalar> online_sgd(
    Model& model, std::span<const std::pair<typename Model::Input, int>> stream, double eta,
    std::size_t n, std::mt19937_64& rng) {
  using S = typename Model::Scalar;
  if (n < 1 || stream.size() < n) throw ValidationError("online SGD needs N examples");

  OnlineSgdResult<S> out;
  out.trajectory.reserve(n);
  VecX<S> params = model.params_flat();
  VecX<S> grad(params.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [input, label] = stream[i];
    if (label != 1 && label != -1) throw ValidationError("labels must be +-1 in theory mode");
    out.trajectory.push_back(params);
    const S f = model.value_with_grad(input, grad);
    ++out.grad_evals;
    const double margin = static_cast<double>(label) * static_cast<double>(f);
    const double psi_prime = -1.0 / (1.0 + std::exp(margin));
    params -= static_cast<S>(eta * psi_prime * static_cast<double>(label)) * grad;
    model.set_params_flat(params);
  }

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  out.sampled_index = pick(rng);
  out.sampled = out.trajectory[out.sampled_index];
  model.set_params_flat(out.sampled);
  return out;
}

}  // namespace stgl
