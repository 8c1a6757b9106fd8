#pragma once

#include <random>

#include "stgl/activations.hpp"
#include "stgl/layer_norm.hpp"
#include "stgl/param_pack.hpp"

namespace stgl {

/// Single-aggregation temporal network over an event-feature set H:
///   z = sigma(sum_k alpha_k W1 u_k) + sum_k u_k,   h = W2 LayerNorm(z).
/// d_hid == d_in so the residual sum is well-typed. With fewer than K events
/// only the leading alpha entries participate.
template <typename S>
struct StoneParams {
  VecX<S> alpha;  // K aggregation weights
  MatX<S> w1;     // d_hid x d_in, d_hid == d_in
  MatX<S> w2;     // d_out x d_hid
  Activation act = Activation::relu;
  bool alpha_trainable = true;

  int k() const { return static_cast<int>(alpha.size()); }
  int d_in() const { return static_cast<int>(w1.cols()); }
  int d_out() const { return static_cast<int>(w2.rows()); }

  /// Matrices ~ N(0, 1/m) with m the hidden (output) dimension; alpha ~
  /// U(-sqrt(3/K), sqrt(3/K)).
  static StoneParams init(int k, int d_in, int d_out, std::mt19937_64& rng) {
    StoneParams p;
    const double stddev = 1.0 / std::sqrt(static_cast<double>(d_out));
    const double bound = std::sqrt(3.0 / static_cast<double>(k));
    std::uniform_real_distribution<double> uni(-bound, bound);
    p.alpha = VecX<S>(k);
    for (int i = 0; i < k; ++i) p.alpha[i] = static_cast<S>(uni(rng));
    p.w1 = gaussian_matrix<S>(d_in, d_in, stddev, rng);
    p.w2 = gaussian_matrix<S>(d_out, d_in, stddev, rng);
    return p;
  }

  static StoneParams fixed_alpha(int k, int d_in, int d_out, std::mt19937_64& rng) {
    StoneParams p = init(k, d_in, d_out, rng);
    p.alpha.setConstant(S(1) / static_cast<S>(k));
    p.alpha_trainable = false;
    return p;
  }

  Eigen::Index param_count() const {
    return (alpha_trainable ? alpha.size() : 0) + w1.size() + w2.size();
  }

  // Flattening order: alpha, W1 row-major, W2 row-major.
  void write(ParamWriter<S>& w) const {
    if (alpha_trainable) w.put(alpha);
    w.put(w1);
    w.put(w2);
  }
  void read(ParamReader<S>& r) {
    if (alpha_trainable) r.get(alpha);
    r.get(w1);
    r.get(w2);
  }
  template <typename Grads>
  void write_grads(ParamWriter<S>& w, const Grads& g) const {
    if (alpha_trainable) w.put(g.alpha);
    w.put(g.w1);
    w.put(g.w2);
  }
};

template <typename S>
struct StoneCache {
  MatX<S> h_set;          // d_in x n event features (columns)
  VecX<S> weighted_sum;   // sum_k alpha_k u_k
  VecX<S> pre;            // W1 * weighted_sum
  VecX<S> z;
  LayerNormCache<S> ln;
  VecX<S> normalized;     // LayerNorm(z)
};

template <typename S>
struct StoneGrads {
  VecX<S> alpha;
  MatX<S> w1;
  MatX<S> w2;
};

/// Node embedding h from the event-feature matrix (one column per event,
/// descending recency). Throws when more events than K are supplied.
template <typename S>
VecX<S> stone_embed(const StoneParams<S>& p, const MatX<S>& h_set, StoneCache<S>* cache = nullptr) {
  const Eigen::Index n = h_set.cols();
  if (n > p.alpha.size()) throw ValidationError("more events than aggregation slots K");
  if (n > 0 && h_set.rows() != p.w1.cols()) throw ValidationError("event feature dimension mismatch");

  VecX<S> weighted = n > 0 ? VecX<S>(h_set * p.alpha.head(n)) : VecX<S>(VecX<S>::Zero(p.d_in()));
  VecX<S> pre = p.w1 * weighted;
  VecX<S> z = activate(p.act, pre);
  if (n > 0) z += h_set.rowwise().sum();

  LayerNormCache<S> ln;
  VecX<S> normalized = layer_norm(z, &ln);
  VecX<S> h = p.w2 * normalized;
  if (cache) {
    cache->h_set = h_set;
    cache->weighted_sum = std::move(weighted);
    cache->pre = std::move(pre);
    cache->z = std::move(z);
    cache->ln = std::move(ln);
    cache->normalized = std::move(normalized);
  }
  return h;
}

/// Backward of the embedding. d(f)/d(alpha_k) = 0 for k beyond the supplied
/// event count.
template <typename S>
StoneGrads<S> stone_embed_backward(const StoneParams<S>& p, const StoneCache<S>& cache,
                                   const VecX<S>& d_h) {
  StoneGrads<S> g;
  g.w2 = d_h * cache.normalized.transpose();
  const VecX<S> d_norm = p.w2.transpose() * d_h;
  const VecX<S> d_z = layer_norm_backward(cache.ln, d_norm);
  const VecX<S> d_pre = (d_z.array() * activate_deriv(p.act, cache.pre).array()).matrix();
  g.w1 = d_pre * cache.weighted_sum.transpose();
  g.alpha = VecX<S>::Zero(p.alpha.size());
  const Eigen::Index n = cache.h_set.cols();
  if (n > 0) g.alpha.head(n) = cache.h_set.transpose() * (p.w1.transpose() * d_pre);
  return g;
}

}  // namespace stgl
