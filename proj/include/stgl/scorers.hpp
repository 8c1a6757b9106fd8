#pragma once

#include <algorithm>
#include <bit>
#include <random>

#include "stgl/classifier.hpp"
#include "stgl/features.hpp"
#include "stgl/gnn.hpp"
#include "stgl/grad_check.hpp"
#include "stgl/memory_model.hpp"
#include "stgl/rng.hpp"
#include "stgl/rnn.hpp"
#include "stgl/stone.hpp"

namespace stgl {

/// How scorers build their model input from the graph.
struct SamplerConfig {
  SampleMode mode = SampleMode::recent;
  Direction direction = Direction::bidirected;
  int k = 10;
  int k2 = 10;
  int hops = 1;  // event-set depth for SToNe-style inputs
};

/// A candidate link to score. idx is the interaction index for positives and
/// -1 for sampled negatives.
struct LinkRef {
  NodeId src = 0;
  NodeId dst = 0;
  Time t = 0;
  EdgeId idx = -1;
};

namespace detail {

inline std::uint64_t time_key(Time t) { return std::bit_cast<std::uint64_t>(t); }

/// Neighborhood lookup shared by the scorers. Uniform sampling derives a
/// fresh generator per (node, time) so queries are pure given the run seed.
struct NeighborhoodSource {
  const TemporalGraph* g = nullptr;
  SamplerConfig cfg;
  RunRng rng{0};

  TemporalNeighborhood sample(NodeId v, Time t, int k) const {
    if (cfg.mode == SampleMode::recent) return recent_neighbors(*g, v, t, k, cfg.direction);
    auto gen = rng.stream("uniform-nbr", static_cast<std::uint64_t>(v), time_key(t));
    return uniform_neighbors(*g, v, t, k, cfg.direction, gen);
  }
};

}  // namespace detail

/// SToNe link scorer: event-feature set per endpoint, shared classifier on
/// the concatenated embeddings. Stateless; pure given the run seed.
template <typename S>
class StoneScorer {
 public:
  using Scalar = S;
  using Input = LinkRef;
  static constexpr bool stateful = false;

  StoneScorer(const TemporalGraph& g, const TimeEncoder& enc, const SamplerConfig& cfg,
              StoneParams<S> params, LinkClassifier<S> clf, RunRng rng)
      : src_{&g, cfg, rng},
        enc_(enc),
        layout_(FeatureLayout::from_graph(g, enc.dim())),
        params_(std::move(params)),
        clf_(std::move(clf)) {}

  const StoneParams<S>& params() const { return params_; }
  LinkClassifier<S>& classifier() { return clf_; }

  Eigen::Index param_count() const { return params_.param_count() + clf_.param_count(); }

  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params_.write(w);
    clf_.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params_.read(r);
    clf_.read(r);
  }

  MatX<S> event_set(NodeId v, Time t) const {
    if (src_.cfg.hops <= 1) {
      const auto nbr = src_.sample(v, t, src_.cfg.k);
      return build_event_features<S>(*src_.g, v, nbr, t, enc_, layout_);
    }
    // Two-hop event set: hop-1 events plus each hop-1 neighbor's own recent
    // events, merged by descending (t, idx) and truncated to K.
    const auto layered = recent_two_hop(*src_.g, v, t, src_.cfg.k, src_.cfg.k2,
                                        src_.cfg.direction);
    TemporalNeighborhood merged;
    merged.root = v;
    merged.query_time = t;
    merged.direction = src_.cfg.direction;
    merged.entries = layered.hop1.entries;
    for (const auto& hop2 : layered.hop2)
      merged.entries.insert(merged.entries.end(), hop2.entries.begin(), hop2.entries.end());
    std::sort(merged.entries.begin(), merged.entries.end(), [](const AdjEntry& a, const AdjEntry& b) {
      return a.t != b.t ? a.t > b.t : a.idx > b.idx;
    });
    if (merged.entries.size() > static_cast<std::size_t>(src_.cfg.k))
      merged.entries.resize(static_cast<std::size_t>(src_.cfg.k));
    return build_event_features<S>(*src_.g, v, merged, t, enc_, layout_);
  }

  VecX<S> embed(NodeId v, Time t) const { return stone_embed(params_, event_set(v, t)); }

  S value(const LinkRef& link) const { return logit(link); }

  S logit(const LinkRef& link) const {
    return clf_.forward(embed(link.src, link.t), embed(link.dst, link.t));
  }

  S logit_with_grad(const LinkRef& link, VecX<S>& grad) const {
    StoneCache<S> ci, cj;
    const VecX<S> hi = stone_embed(params_, event_set(link.src, link.t), &ci);
    const VecX<S> hj = stone_embed(params_, event_set(link.dst, link.t), &cj);
    typename LinkClassifier<S>::Cache cc;
    const S out = clf_.forward(hi, hj, &cc);
    VecX<S> d_hi, d_hj;
    const auto cg = clf_.backward(cc, S(1), &d_hi, &d_hj);
    StoneGrads<S> gi = stone_embed_backward(params_, ci, d_hi);
    const StoneGrads<S> gj = stone_embed_backward(params_, cj, d_hj);
    gi.alpha += gj.alpha;
    gi.w1 += gj.w1;
    gi.w2 += gj.w2;
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    params_.write_grads(w, gi);
    clf_.write_grads(w, cg);
    return out;
  }

  void reset_stream() {}
  void on_event(EdgeId) {}

 private:
  detail::NeighborhoodSource src_;
  TimeEncoder enc_;
  FeatureLayout layout_;
  StoneParams<S> params_;
  LinkClassifier<S> clf_;
};

/// GNN link scorer over the (L-1)-deep temporal computation tree; the
/// node-level head is unused, the classifier scores embedding pairs.
template <typename S>
class GnnScorer {
 public:
  using Scalar = S;
  using Input = LinkRef;
  static constexpr bool stateful = false;

  GnnScorer(const TemporalGraph& g, const TimeEncoder& enc, const SamplerConfig& cfg,
            GnnParams<S> params, LinkClassifier<S> clf, RunRng rng)
      : src_{&g, cfg, rng},
        enc_(enc),
        layout_(FeatureLayout::from_graph(g, enc.dim())),
        params_(std::move(params)),
        clf_(std::move(clf)) {}

  const GnnParams<S>& params() const { return params_; }

  Eigen::Index param_count() const { return params_.embed_param_count() + clf_.param_count(); }

  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params_.write_embed(w);
    clf_.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params_.read_embed(r);
    clf_.read(r);
  }

  /// Tree: root (feature never read) -> sampled events -> their events.
  /// Each child's feature is the event feature of the interaction that
  /// links it to its parent, timed at the parent's query time.
  GnnTree<S> build_tree(NodeId v, Time t) const {
    GnnTree<S> root;
    root.x = VecX<S>::Zero(layout_.event_dim());
    attach_children(root, v, t, params_.layers() - 1);
    return root;
  }

  S value(const LinkRef& link) const { return logit(link); }

  S logit(const LinkRef& link) const {
    GnnCache<S> unused;
    return clf_.forward(gnn_embed(params_, build_tree(link.src, link.t), &unused),
                        gnn_embed(params_, build_tree(link.dst, link.t), &unused));
  }

  S logit_with_grad(const LinkRef& link, VecX<S>& grad) const {
    const GnnTree<S> ti = build_tree(link.src, link.t);
    const GnnTree<S> tj = build_tree(link.dst, link.t);
    GnnCache<S> ci, cj;
    const VecX<S> hi = gnn_embed(params_, ti, &ci);
    const VecX<S> hj = gnn_embed(params_, tj, &cj);
    typename LinkClassifier<S>::Cache cc;
    const S out = clf_.forward(hi, hj, &cc);
    VecX<S> d_hi, d_hj;
    const auto cg = clf_.backward(cc, S(1), &d_hi, &d_hj);
    GnnGrads<S> gi = gnn_embed_backward(params_, ci, d_hi);
    const GnnGrads<S> gj = gnn_embed_backward(params_, cj, d_hj);
    for (std::size_t l = 0; l < gi.w.size(); ++l) gi.w[l] += gj.w[l];
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    for (const auto& m : gi.w) w.put(m);
    clf_.write_grads(w, cg);
    return out;
  }

  void reset_stream() {}
  void on_event(EdgeId) {}

 private:
  void attach_children(GnnTree<S>& node, NodeId v, Time t, int depth) const {
    if (depth == 0) return;
    const auto nbr = src_.sample(v, t, src_.cfg.k);
    const MatX<S> u = build_event_features<S>(*src_.g, v, nbr, t, enc_, layout_);
    node.children.resize(nbr.entries.size());
    for (std::size_t c = 0; c < nbr.entries.size(); ++c) {
      node.children[c].x = u.col(static_cast<Eigen::Index>(c));
      attach_children(node.children[c], nbr.entries[c].nbr, nbr.entries[c].t, depth - 1);
    }
  }

  detail::NeighborhoodSource src_;
  TimeEncoder enc_;
  FeatureLayout layout_;
  GnnParams<S> params_;
  LinkClassifier<S> clf_;
};

/// RNN link scorer: feeds the L-1 most recent event features, oldest first.
template <typename S>
class RnnScorer {
 public:
  using Scalar = S;
  using Input = LinkRef;
  static constexpr bool stateful = false;

  RnnScorer(const TemporalGraph& g, const TimeEncoder& enc, const SamplerConfig& cfg,
            RnnParams<S> params, LinkClassifier<S> clf, RunRng rng)
      : src_{&g, cfg, rng},
        enc_(enc),
        layout_(FeatureLayout::from_graph(g, enc.dim())),
        params_(std::move(params)),
        clf_(std::move(clf)) {}

  const RnnParams<S>& params() const { return params_; }

  Eigen::Index param_count() const { return params_.embed_param_count() + clf_.param_count(); }

  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params_.write_embed(w);
    clf_.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params_.read_embed(r);
    clf_.read(r);
  }

  MatX<S> event_sequence(NodeId v, Time t) const {
    const auto nbr = src_.sample(v, t, params_.steps);
    const MatX<S> u = build_event_features<S>(*src_.g, v, nbr, t, enc_, layout_);
    return u.rowwise().reverse();  // descending recency -> oldest first
  }

  S value(const LinkRef& link) const { return logit(link); }

  S logit(const LinkRef& link) const {
    return clf_.forward(rnn_embed(params_, event_sequence(link.src, link.t)),
                        rnn_embed(params_, event_sequence(link.dst, link.t)));
  }

  S logit_with_grad(const LinkRef& link, VecX<S>& grad) const {
    RnnCache<S> ci, cj;
    const VecX<S> hi = rnn_embed(params_, event_sequence(link.src, link.t), &ci);
    const VecX<S> hj = rnn_embed(params_, event_sequence(link.dst, link.t), &cj);
    typename LinkClassifier<S>::Cache cc;
    const S out = clf_.forward(hi, hj, &cc);
    VecX<S> d_hi, d_hj;
    const auto cg = clf_.backward(cc, S(1), &d_hi, &d_hj);
    RnnGrads<S> gi = rnn_embed_backward(params_, ci, d_hi);
    const RnnGrads<S> gj = rnn_embed_backward(params_, cj, d_hj);
    gi.w1 += gj.w1;
    gi.w2 += gj.w2;
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    w.put(gi.w1);
    w.put(gi.w2);
    clf_.write_grads(w, cg);
    return out;
  }

  void reset_stream() {}
  void on_event(EdgeId) {}

 private:
  detail::NeighborhoodSource src_;
  TimeEncoder enc_;
  FeatureLayout layout_;
  RnnParams<S> params_;
  LinkClassifier<S> clf_;
};

/// Memory link scorer. Scoring a candidate (i, j, t) evaluates one virtual
/// update per endpoint on top of the detached stored memories, so gradients
/// flow through exactly that step. Committed updates (on_event) use the real
/// edge features; scoring uses zero edge features plus the elapsed-time
/// encoding, identically for positives and negatives.
template <typename S>
class MemoryScorer {
 public:
  using Scalar = S;
  using Input = LinkRef;
  static constexpr bool stateful = true;

  MemoryScorer(const TemporalGraph& g, const TimeEncoder& enc, MemoryParams<S> params,
               LinkClassifier<S> clf)
      : g_(&g), enc_(enc), params_(std::move(params)), clf_(std::move(clf)) {
    reset_stream();
  }

  const MemoryParams<S>& params() const { return params_; }
  const MemoryState<S>& state() const { return state_; }

  Eigen::Index param_count() const { return params_.embed_param_count() + clf_.param_count(); }

  VecX<S> params_flat() const {
    VecX<S> out(param_count());
    ParamWriter<S> w(out);
    params_.write_embed(w);
    clf_.write(w);
    return out;
  }
  void set_params_flat(const VecX<S>& v) {
    ParamReader<S> r(v);
    params_.read_embed(r);
    clf_.read(r);
  }

  void reset_stream() { state_.reset(params_, g_->node_feats(), g_->num_nodes()); }

  /// Commit the interaction into both endpoints' memories.
  void on_event(EdgeId e) {
    const Interaction& ev = g_->interactions()[static_cast<std::size_t>(e)];
    memory_step(params_, state_, ev.src, ev.dst, ev.timestamp, edge_input(e, ev.src, ev.timestamp),
                edge_input(e, ev.dst, ev.timestamp));
  }

  S value(const LinkRef& link) const { return logit(link); }

  S logit(const LinkRef& link) const {
    const VecX<S> si = state_.s.col(link.src);
    const VecX<S> sj = state_.s.col(link.dst);
    return clf_.forward(memory_update_value(params_, si, sj, score_input(link.src, link.t)),
                        memory_update_value(params_, sj, si, score_input(link.dst, link.t)));
  }

  S logit_with_grad(const LinkRef& link, VecX<S>& grad) const {
    const VecX<S> si = state_.s.col(link.src);
    const VecX<S> sj = state_.s.col(link.dst);
    MemoryStepCache<S> ci, cj;
    const VecX<S> hi = memory_update_value(params_, si, sj, score_input(link.src, link.t), &ci);
    const VecX<S> hj = memory_update_value(params_, sj, si, score_input(link.dst, link.t), &cj);
    typename LinkClassifier<S>::Cache cc;
    const S out = clf_.forward(hi, hj, &cc);
    VecX<S> d_hi, d_hj;
    const auto cg = clf_.backward(cc, S(1), &d_hi, &d_hj);
    MemoryGrads<S> gi = memory_update_backward(params_, ci, d_hi);
    const MemoryGrads<S> gj = memory_update_backward(params_, cj, d_hj);
    gi.w1 += gj.w1;
    gi.w2 += gj.w2;
    gi.w3 += gj.w3;
    grad.resize(param_count());
    ParamWriter<S> w(grad);
    w.put(gi.w1);
    w.put(gi.w2);
    w.put(gi.w3);
    clf_.write_grads(w, cg);
    return out;
  }

 private:
  /// [edge features || psi(t - last event of v)] for committed updates.
  VecX<S> edge_input(EdgeId e, NodeId v, Time t) const {
    VecX<S> in(g_->edge_feat_dim() + enc_.dim());
    if (g_->edge_feat_dim() > 0)
      in.head(g_->edge_feat_dim()) = g_->edge_feats().row(e).transpose().cast<S>();
    VecX<S> psi(enc_.dim());
    enc_.encode_into<S>(t - state_.last_time[static_cast<std::size_t>(v)], psi);
    in.tail(enc_.dim()) = psi;
    return in;
  }

  /// Candidate links are scored without access to their edge features.
  VecX<S> score_input(NodeId v, Time t) const {
    VecX<S> in = VecX<S>::Zero(g_->edge_feat_dim() + enc_.dim());
    VecX<S> psi(enc_.dim());
    enc_.encode_into<S>(t - state_.last_time[static_cast<std::size_t>(v)], psi);
    in.tail(enc_.dim()) = psi;
    return in;
  }

  const TemporalGraph* g_;
  TimeEncoder enc_;
  MemoryParams<S> params_;
  LinkClassifier<S> clf_;
  MemoryState<S> state_;
};

}  // namespace stgl
