#pragma once

#include <cmath>
#include <random>

#include "stgl/activations.hpp"
#include "stgl/param_pack.hpp"

namespace stgl {

/// 2-layer ReLU perceptron scoring a node-embedding pair:
/// logit = v2 * relu(v1 * [h_i || h_j] + b1) + b2.
template <typename S>
struct LinkClassifier {
  MatX<S> v1;     // d_mlp x in_dim
  VecX<S> b1;     // d_mlp
  RowVecX<S> v2;  // 1 x d_mlp
  S b2 = S(0);

  int in_dim() const { return static_cast<int>(v1.cols()); }
  int hidden_dim() const { return static_cast<int>(v1.rows()); }

  static LinkClassifier init(int in_dim, int d_mlp, double stddev, std::mt19937_64& rng) {
    LinkClassifier c;
    c.v1 = gaussian_matrix<S>(d_mlp, in_dim, stddev, rng);
    c.b1 = VecX<S>::Zero(d_mlp);
    c.v2 = gaussian_matrix<S>(1, d_mlp, stddev, rng).row(0);
    c.b2 = S(0);
    return c;
  }

  Eigen::Index param_count() const { return v1.size() + b1.size() + v2.size() + 1; }

  struct Cache {
    VecX<S> input;    // [h_i || h_j]
    VecX<S> pre;      // v1 * input + b1
    VecX<S> hidden;   // relu(pre)
  };

  S forward(const VecX<S>& hi, const VecX<S>& hj, Cache* cache = nullptr) const {
    VecX<S> input(hi.size() + hj.size());
    input << hi, hj;
    if (input.size() != v1.cols()) throw ValidationError("classifier input dimension mismatch");
    VecX<S> pre = v1 * input + b1;
    VecX<S> hidden = activate(Activation::relu, pre);
    const S logit = v2.dot(hidden) + b2;
    if (cache) {
      cache->input = std::move(input);
      cache->pre = std::move(pre);
      cache->hidden = std::move(hidden);
    }
    return logit;
  }

  struct Grads {
    MatX<S> v1;
    VecX<S> b1;
    RowVecX<S> v2;
    S b2 = S(0);
  };

  /// Backward for d(logit); also yields d(h_i), d(h_j) through the input.
  Grads backward(const Cache& cache, S d_logit, VecX<S>* d_hi, VecX<S>* d_hj) const {
    Grads g;
    g.v2 = d_logit * cache.hidden.transpose();
    g.b2 = d_logit;
    VecX<S> d_pre =
        (d_logit * v2.transpose().array() * activate_deriv(Activation::relu, cache.pre).array())
            .matrix();
    g.v1 = d_pre * cache.input.transpose();
    g.b1 = d_pre;
    if (d_hi || d_hj) {
      const VecX<S> d_input = v1.transpose() * d_pre;
      const Eigen::Index half = cache.input.size() / 2;
      if (d_hi) *d_hi = d_input.head(half);
      if (d_hj) *d_hj = d_input.tail(half);
    }
    return g;
  }

  // Flattening order: v1 row-major, b1, v2, b2.
  void write(ParamWriter<S>& w) const {
    w.put(v1);
    w.put(b1);
    w.put(v2);
    w.put(b2);
  }
  void read(ParamReader<S>& r) {
    r.get(v1);
    r.get(b1);
    r.get(v2);
    r.get(b2);
  }
  void write_grads(ParamWriter<S>& w, const Grads& g) const {
    w.put(g.v1);
    w.put(g.b1);
    w.put(g.v2);
    w.put(g.b2);
  }
};

}  // namespace stgl
