#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "stgl/activations.hpp"
#include "stgl/param_pack.hpp"

namespace stgl {

/// Memory-block recurrence. On an interaction (i, j, t):
///   s_i(t) = sigma(kappa (W1 s_i+ + W2 s_j+ + W3 e_ij(t)))
/// with the symmetric update for j, kappa = 1/sqrt(3). Inputs s+ are read as
/// detached values, so gradients never flow into states written earlier.
/// Node-level prediction f = w4 . s_i(t); s_i(0) = W0 x_i (zero when the
/// dataset has no node features).
template <typename S>
struct MemoryParams {
  MatX<S> w1;   // m x m, trainable
  MatX<S> w2;   // m x m, trainable
  MatX<S> w3;   // m x d_edge, trainable (edge feature + time encoding input)
  VecX<S> w4;   // m, trainable scalar head
  MatX<S> w0;   // m x d_n, frozen init lift (0 columns when featureless)
  Activation act = Activation::tanh;

  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int edge_dim() const { return static_cast<int>(w3.cols()); }
  static constexpr double kappa = 0.57735026918962576451;  // 1/sqrt(3)

  static MemoryParams init(int d_edge, int d_node, int m, std::mt19937_64& rng) {
    MemoryParams p;
    const double stddev = 1.0 / std::sqrt(static_cast<double>(m));
    p.w1 = gaussian_matrix<S>(m, m, stddev, rng);
    p.w2 = gaussian_matrix<S>(m, m, stddev, rng);
    p.w3 = gaussian_matrix<S>(m, d_edge, stddev, rng);
    p.w4 = gaussian_matrix<S>(m, 1, stddev, rng).col(0);
    p.w0 = gaussian_matrix<S>(m, d_node, stddev, rng);
    return p;
  }

  Eigen::Index embed_param_count() const { return w1.size() + w2.size() + w3.size(); }
  Eigen::Index param_count() const { return embed_param_count() + w4.size(); }

  // Flattening order: W1, W2, W3 row-major, then the head. W0 is frozen.
  void write_embed(ParamWriter<S>& w) const {
    w.put(w1);
    w.put(w2);
    w.put(w3);
  }
  void read_embed(ParamReader<S>& r) {
    r.get(w1);
    r.get(w2);
    r.get(w3);
  }
  void write(ParamWriter<S>& w) const {
    write_embed(w);
    w.put(w4);
  }
  void read(ParamReader<S>& r) {
    read_embed(r);
    r.get(w4);
  }
};

/// Per-node memory blocks; single writer, sequential by timestamp order.
template <typename S>
struct MemoryState {
  MatX<S> s;                    // m x |V|, one column per node
  std::vector<Time> last_time;  // latest interaction time per node

  void reset(const MemoryParams<S>& p, const MatXd& node_feats, NodeId num_nodes) {
    const int m = p.hidden_dim();
    s = MatX<S>::Zero(m, num_nodes);
    if (p.w0.cols() > 0 && node_feats.cols() > 0)
      s = p.w0 * node_feats.transpose().cast<S>();
    last_time.assign(static_cast<std::size_t>(num_nodes), Time(0));
  }
};

template <typename S>
struct MemoryStepCache {
  VecX<S> s_self;   // detached memory of the updated node
  VecX<S> s_other;  // detached memory of the counterpart
  VecX<S> edge_in;
  VecX<S> pre;
  VecX<S> s_new;
};

template <typename S>
struct MemoryGrads {
  MatX<S> w1;
  MatX<S> w2;
  MatX<S> w3;
  VecX<S> w4;
};

/// One-sided update rule; pure in (params, inputs). Used both for committed
/// state updates and for scoring a candidate interaction.
template <typename S>
VecX<S> memory_update_value(const MemoryParams<S>& p, const VecX<S>& s_self,
                            const VecX<S>& s_other, const VecX<S>& edge_in,
                            MemoryStepCache<S>* cache = nullptr) {
  if (edge_in.size() != p.w3.cols()) throw ValidationError("memory edge input dimension mismatch");
  const S kappa = static_cast<S>(MemoryParams<S>::kappa);
  VecX<S> pre = kappa * (p.w1 * s_self + p.w2 * s_other + p.w3 * edge_in);
  VecX<S> out = activate(p.act, pre);
  if (cache) {
    cache->s_self = s_self;
    cache->s_other = s_other;
    cache->edge_in = edge_in;
    cache->pre = std::move(pre);
    cache->s_new = out;
  }
  return out;
}

/// Gradients of the one update step the prediction flows through; everything
/// older is behind the detach.
template <typename S>
MemoryGrads<S> memory_update_backward(const MemoryParams<S>& p, const MemoryStepCache<S>& cache,
                                      const VecX<S>& d_out) {
  const S kappa = static_cast<S>(MemoryParams<S>::kappa);
  MemoryGrads<S> g;
  const VecX<S> d_pre =
      (d_out.array() * activate_deriv(p.act, cache.pre).array()).matrix() * kappa;
  g.w1 = d_pre * cache.s_self.transpose();
  g.w2 = d_pre * cache.s_other.transpose();
  g.w3 = d_pre * cache.edge_in.transpose();
  g.w4 = VecX<S>::Zero(p.w4.size());
  return g;
}

/// Commits the symmetric two-sided update for an interaction. Both sides read
/// the pre-update (detached) memories. Throws on out-of-order interactions.
template <typename S>
void memory_step(const MemoryParams<S>& p, MemoryState<S>& state, NodeId i, NodeId j, Time t,
                 const VecX<S>& edge_in_i, const VecX<S>& edge_in_j) {
  if (t < state.last_time[static_cast<std::size_t>(i)] ||
      t < state.last_time[static_cast<std::size_t>(j)])
    throw ValidationError("out-of-order memory update");
  const VecX<S> si = state.s.col(i);
  const VecX<S> sj = state.s.col(j);
  state.s.col(i) = memory_update_value(p, si, sj, edge_in_i);
  state.s.col(j) = memory_update_value(p, sj, si, edge_in_j);
  state.last_time[static_cast<std::size_t>(i)] = t;
  state.last_time[static_cast<std::size_t>(j)] = t;
}

}  // namespace stgl
