#pragma once

#include "stgl/gnn.hpp"
#include "stgl/memory_model.hpp"
#include "stgl/rnn.hpp"

namespace stgl {

/// Node-level scalar prediction heads used by the single-example SGD
/// procedure and the gradient oracle suite. Each wraps a parameter bundle
/// with the flatten/value/grad surface shared by every differentiable model
/// here.

template <typename S>
struct GnnNodeModel {
  using Scalar = S;
  using Input = GnnTree<S>;
  GnnParams<S> params;

  Eigen::Index param_count() const { return params.param_count(); }
  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params.read(r);
  }
  S value(const Input& in) const { return gnn_forward(params, in); }
  S value_with_grad(const Input& in, VecX<S>& grad) const {
    GnnCache<S> cache;
    const S f = gnn_forward(params, in, &cache);
    const GnnGrads<S> g = gnn_backward(params, cache);
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    for (const auto& m : g.w) w.put(m);
    w.put(g.head);
    return f;
  }
};

template <typename S>
struct RnnNodeModel {
  using Scalar = S;
  using Input = MatX<S>;  // d x (L-1) events, oldest first
  RnnParams<S> params;

  Eigen::Index param_count() const { return params.param_count(); }
  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params.read(r);
  }
  S value(const Input& in) const { return rnn_forward(params, in); }
  S value_with_grad(const Input& in, VecX<S>& grad) const {
    RnnCache<S> cache;
    const S f = rnn_forward(params, in, &cache);
    const RnnGrads<S> g = rnn_backward(params, cache);
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    w.put(g.w1);
    w.put(g.w2);
    w.put(g.w3);
    return f;
  }
};

/// One memory update step plus the node head f = w4 . s_i(t); the stored
/// memories entering the step are constants by the stop-gradient rule.
template <typename S>
struct MemoryNodeModel {
  using Scalar = S;
  struct StepInput {
    VecX<S> s_self;
    VecX<S> s_other;
    VecX<S> edge_in;
  };
  using Input = StepInput;
  MemoryParams<S> params;

  Eigen::Index param_count() const { return params.param_count(); }
  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params.read(r);
  }
  S value(const Input& in) const {
    return params.w4.dot(memory_update_value(params, in.s_self, in.s_other, in.edge_in));
  }
  S value_with_grad(const Input& in, VecX<S>& grad) const {
    MemoryStepCache<S> cache;
    const VecX<S> s = memory_update_value(params, in.s_self, in.s_other, in.edge_in, &cache);
    const S f = params.w4.dot(s);
    MemoryGrads<S> g = memory_update_backward(params, cache, params.w4);
    g.w4 = s;
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    w.put(g.w1);
    w.put(g.w2);
    w.put(g.w3);
    w.put(g.w4);
    return f;
  }
};

}  // namespace stgl
