#pragma once

#include <cmath>
#include <random>

#include "stgl/activations.hpp"
#include "stgl/param_pack.hpp"

namespace stgl {

/// (L-1)-step recurrent network over a sequence of temporal events, oldest
/// first:
///   h_l = sigma(kappa (W1 h_{l-1} + W2 x_l)) + alpha h_{l-1},  h_0 = 0
///   x_l = W0 v_l (W0 frozen),  kappa = 1/sqrt(2),  f = W3 h_{L-1}.
template <typename S>
struct RnnParams {
  MatX<S> w1;      // m x m, trainable
  MatX<S> w2;      // m x m, trainable
  RowVecX<S> w3;   // 1 x m, trainable scalar head
  MatX<S> w0;      // m x d, frozen input lift
  int steps = 1;   // L - 1
  int residual = 0;
  Activation act = Activation::tanh;

  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int input_dim() const { return static_cast<int>(w0.cols()); }
  static constexpr double kappa = 0.70710678118654752440;  // 1/sqrt(2)

  static RnnParams init(int layers, int d, int m, std::mt19937_64& rng) {
    if (layers < 2) throw ValidationError("RNN needs L >= 2");
    RnnParams p;
    const double stddev = 1.0 / std::sqrt(static_cast<double>(m));
    p.w1 = gaussian_matrix<S>(m, m, stddev, rng);
    p.w2 = gaussian_matrix<S>(m, m, stddev, rng);
    p.w3 = gaussian_matrix<S>(1, m, stddev, rng).row(0);
    p.w0 = gaussian_matrix<S>(m, d, stddev, rng);
    p.steps = layers - 1;
    return p;
  }

  Eigen::Index embed_param_count() const { return w1.size() + w2.size(); }
  Eigen::Index param_count() const { return embed_param_count() + w3.size(); }

  // Flattening order: W1, W2 row-major, then the head. W0 is frozen and
  // excluded.
  void write_embed(ParamWriter<S>& w) const {
    w.put(w1);
    w.put(w2);
  }
  void read_embed(ParamReader<S>& r) {
    r.get(w1);
    r.get(w2);
  }
  void write(ParamWriter<S>& w) const {
    write_embed(w);
    w.put(w3);
  }
  void read(ParamReader<S>& r) {
    read_embed(r);
    r.get(w3);
  }
};

template <typename S>
struct RnnCache {
  MatX<S> x;        // m x steps, lifted events
  MatX<S> pre;      // m x steps, pre-activations
  MatX<S> h;        // m x (steps + 1), h_0..h_{L-1}
  bool padded = false;
};

template <typename S>
struct RnnGrads {
  MatX<S> w1;
  MatX<S> w2;
  RowVecX<S> w3;
};

/// Events: d x n matrix, oldest event first. Fewer than L-1 events are
/// left-padded with zero events (flagged in the cache); more is an error.
template <typename S>
VecX<S> rnn_embed(const RnnParams<S>& p, const MatX<S>& events, RnnCache<S>* cache = nullptr) {
  const int steps = p.steps;
  if (events.cols() > steps) throw ValidationError("more events than RNN steps");
  if (events.cols() > 0 && events.rows() != p.w0.cols())
    throw ValidationError("event dimension mismatch");
  const int m = p.hidden_dim();
  const int pad = steps - static_cast<int>(events.cols());

  MatX<S> x = MatX<S>::Zero(m, steps);
  if (events.cols() > 0) x.rightCols(events.cols()) = p.w0 * events;

  MatX<S> pre(m, steps);
  MatX<S> h = MatX<S>::Zero(m, steps + 1);
  const S kappa = static_cast<S>(RnnParams<S>::kappa);
  for (int l = 1; l <= steps; ++l) {
    pre.col(l - 1) = kappa * (p.w1 * h.col(l - 1) + p.w2 * x.col(l - 1));
    h.col(l) = activate(p.act, VecX<S>(pre.col(l - 1)));
    if (p.residual) h.col(l) += h.col(l - 1);
  }
  VecX<S> out = h.col(steps);
  if (cache) {
    cache->x = std::move(x);
    cache->pre = std::move(pre);
    cache->h = std::move(h);
    cache->padded = pad > 0;
  }
  return out;
}

template <typename S>
S rnn_forward(const RnnParams<S>& p, const MatX<S>& events, RnnCache<S>* cache = nullptr) {
  return p.w3.dot(rnn_embed(p, events, cache));
}

template <typename S>
RnnGrads<S> rnn_embed_backward(const RnnParams<S>& p, const RnnCache<S>& cache,
                               const VecX<S>& d_out) {
  const int m = p.hidden_dim();
  const int steps = p.steps;
  const S kappa = static_cast<S>(RnnParams<S>::kappa);
  RnnGrads<S> g;
  g.w1 = MatX<S>::Zero(m, m);
  g.w2 = MatX<S>::Zero(m, m);
  g.w3 = RowVecX<S>::Zero(m);

  VecX<S> dh = d_out;
  for (int l = steps; l >= 1; --l) {
    const VecX<S> d_pre =
        (dh.array() * activate_deriv(p.act, VecX<S>(cache.pre.col(l - 1))).array()).matrix() *
        kappa;
    g.w1 += d_pre * cache.h.col(l - 1).transpose();
    g.w2 += d_pre * cache.x.col(l - 1).transpose();
    VecX<S> dh_prev = p.w1.transpose() * d_pre;
    if (p.residual) dh_prev += dh;
    dh = std::move(dh_prev);
  }
  return g;
}

template <typename S>
RnnGrads<S> rnn_backward(const RnnParams<S>& p, const RnnCache<S>& cache, S d_f = S(1)) {
  RnnGrads<S> g = rnn_embed_backward(p, cache, VecX<S>(d_f * p.w3.transpose()));
  g.w3 = d_f * cache.h.col(p.steps).transpose();
  return g;
}

}  // namespace stgl
