#pragma once

#include <random>
#include <vector>

#include "stgl/activations.hpp"
#include "stgl/param_pack.hpp"

namespace stgl {

/// L-layer mean-aggregation network over a temporal computation tree:
///   h^(1)(n) = sigma(W1 * mean_c x_c)
///   h^(l)(n) = sigma(Wl * mean_c h^(l-1)(c)) + alpha h^(l-1)(n),  l >= 2
///   f        = head * h^(L-1)(root)
/// Aggregation weights are row-normalized (P = 1/|children|, tau = 1); an
/// empty child set contributes a zero aggregate.
template <typename S>
struct GnnParams {
  std::vector<MatX<S>> w;  // W^(1..L-1): w[0] is m x d, the rest m x m
  RowVecX<S> head;         // W^(L), 1 x m (node-level scalar head)
  int residual = 0;        // alpha in {0, 1}
  Activation act = Activation::relu;

  int layers() const { return static_cast<int>(w.size()) + 1; }  // L
  int hidden_dim() const { return static_cast<int>(w[0].rows()); }
  int input_dim() const { return static_cast<int>(w[0].cols()); }

  static GnnParams init(int layers, int d, int m, std::mt19937_64& rng) {
    if (layers < 2) throw ValidationError("GNN needs L >= 2");
    GnnParams p;
    const double stddev = 1.0 / std::sqrt(static_cast<double>(m));
    p.w.push_back(gaussian_matrix<S>(m, d, stddev, rng));
    for (int l = 2; l <= layers - 1; ++l) p.w.push_back(gaussian_matrix<S>(m, m, stddev, rng));
    p.head = gaussian_matrix<S>(1, m, stddev, rng).row(0);
    return p;
  }

  Eigen::Index embed_param_count() const {
    Eigen::Index n = 0;
    for (const auto& m : w) n += m.size();
    return n;
  }
  Eigen::Index param_count() const { return embed_param_count() + head.size(); }

  // Flattening order: W^(1) ... W^(L-1) row-major, then the head when present.
  void write_embed(ParamWriter<S>& wr) const {
    for (const auto& m : w) wr.put(m);
  }
  void read_embed(ParamReader<S>& r) {
    for (auto& m : w) r.get(m);
  }
  void write(ParamWriter<S>& wr) const {
    write_embed(wr);
    wr.put(head);
  }
  void read(ParamReader<S>& r) {
    read_embed(r);
    r.get(head);
  }
};

/// Temporal computation tree. Each node carries its base feature x; children
/// are its temporal neighbors at strictly earlier times. The root's own x is
/// never read by the forward rule.
template <typename S>
struct GnnTree {
  VecX<S> x;
  std::vector<GnnTree<S>> children;
};

namespace detail {

template <typename S>
struct GnnNodeCache {
  // Per layer l (1-based, index l): aggregate z~, pre-activation, h^(l).
  std::vector<VecX<S>> agg;
  std::vector<VecX<S>> pre;
  std::vector<VecX<S>> h;
};

template <typename S>
struct GnnForwardPass {
  const GnnParams<S>* p;
  const GnnTree<S>* root;
  std::vector<GnnNodeCache<S>> cache;  // indexed by DFS order
  std::vector<const GnnTree<S>*> nodes;
  std::vector<int> parent;
  std::vector<std::vector<int>> child_ids;

  void index(const GnnTree<S>& node, int parent_id) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(&node);
    parent.push_back(parent_id);
    child_ids.emplace_back();
    if (parent_id >= 0) child_ids[static_cast<std::size_t>(parent_id)].push_back(id);
    for (const auto& c : node.children) index(c, id);
  }

  // h^(l) of node `id`; memoized.
  const VecX<S>& h(int id, int l) {
    auto& nc = cache[static_cast<std::size_t>(id)];
    if (l == 0) {
      if (nc.h[0].size() == 0) nc.h[0] = nodes[static_cast<std::size_t>(id)]->x;
      return nc.h[0];
    }
    auto& out = nc.h[static_cast<std::size_t>(l)];
    if (out.size() != 0) return out;
    const auto& kids = child_ids[static_cast<std::size_t>(id)];
    const int m = p->hidden_dim();
    VecX<S> agg = VecX<S>::Zero(l == 1 ? p->input_dim() : m);
    if (!kids.empty()) {
      for (int c : kids) agg += h(c, l - 1);
      agg /= static_cast<S>(kids.size());
    }
    VecX<S> pre = p->w[static_cast<std::size_t>(l - 1)] * agg;
    out = activate(p->act, pre);
    if (l >= 2 && p->residual) out += h(id, l - 1);
    nc.agg[static_cast<std::size_t>(l)] = std::move(agg);
    nc.pre[static_cast<std::size_t>(l)] = std::move(pre);
    return out;
  }

  void run() {
    index(*root, -1);
    const int layers = p->layers();
    cache.resize(nodes.size());
    for (auto& nc : cache) {
      nc.agg.resize(static_cast<std::size_t>(layers));
      nc.pre.resize(static_cast<std::size_t>(layers));
      nc.h.resize(static_cast<std::size_t>(layers));
    }
    h(0, layers - 1);
  }
};

}  // namespace detail

template <typename S>
struct GnnCache {
  detail::GnnForwardPass<S> pass;
};

template <typename S>
struct GnnGrads {
  std::vector<MatX<S>> w;
  RowVecX<S> head;
};

/// Root embedding h^(L-1).
template <typename S>
VecX<S> gnn_embed(const GnnParams<S>& p, const GnnTree<S>& tree, GnnCache<S>* cache) {
  detail::GnnForwardPass<S> pass;
  pass.p = &p;
  pass.root = &tree;
  pass.run();
  VecX<S> h = pass.cache[0].h[static_cast<std::size_t>(p.layers() - 1)];
  if (cache) cache->pass = std::move(pass);
  return h;
}

/// Node-level scalar prediction f = head * h^(L-1)(root).
template <typename S>
S gnn_forward(const GnnParams<S>& p, const GnnTree<S>& tree, GnnCache<S>* cache = nullptr) {
  return p.head.dot(gnn_embed(p, tree, cache));
}

/// Reverse accumulation over the tree given d(loss)/d(h_root).
template <typename S>
GnnGrads<S> gnn_embed_backward(const GnnParams<S>& p, GnnCache<S>& cache, const VecX<S>& d_root) {
  auto& pass = cache.pass;
  const int layers = p.layers();
  const std::size_t n_nodes = pass.nodes.size();

  GnnGrads<S> g;
  g.w.resize(p.w.size());
  for (std::size_t i = 0; i < p.w.size(); ++i) g.w[i] = MatX<S>::Zero(p.w[i].rows(), p.w[i].cols());
  g.head = RowVecX<S>::Zero(p.head.size());

  // d[n][l] accumulates d(loss)/d(h^(l)(n)).
  std::vector<std::vector<VecX<S>>> d(n_nodes);
  for (std::size_t n = 0; n < n_nodes; ++n) d[n].resize(static_cast<std::size_t>(layers));
  d[0][static_cast<std::size_t>(layers - 1)] = d_root;

  for (int l = layers - 1; l >= 1; --l) {
    for (std::size_t n = 0; n < n_nodes; ++n) {
      VecX<S>& dh = d[n][static_cast<std::size_t>(l)];
      if (dh.size() == 0) continue;
      auto& nc = pass.cache[n];
      if (nc.pre[static_cast<std::size_t>(l)].size() == 0) continue;  // never computed
      const VecX<S> d_pre =
          (dh.array() * activate_deriv(p.act, nc.pre[static_cast<std::size_t>(l)]).array())
              .matrix();
      g.w[static_cast<std::size_t>(l - 1)] +=
          d_pre * nc.agg[static_cast<std::size_t>(l)].transpose();
      const auto& kids = pass.child_ids[n];
      if (!kids.empty() && l >= 2) {
        const VecX<S> d_agg = p.w[static_cast<std::size_t>(l - 1)].transpose() * d_pre /
                              static_cast<S>(kids.size());
        for (int c : kids) {
          auto& slot = d[static_cast<std::size_t>(c)][static_cast<std::size_t>(l - 1)];
          if (slot.size() == 0) slot = d_agg;
          else slot += d_agg;
        }
      }
      if (l >= 2 && p.residual) {
        auto& slot = d[n][static_cast<std::size_t>(l - 1)];
        if (slot.size() == 0) slot = dh;
        else slot += dh;
      }
    }
  }
  return g;
}

/// Backward of the scalar prediction.
template <typename S>
GnnGrads<S> gnn_backward(const GnnParams<S>& p, GnnCache<S>& cache, S d_f = S(1)) {
  GnnGrads<S> g = gnn_embed_backward(p, cache, VecX<S>(d_f * p.head.transpose()));
  g.head = d_f * cache.pass.cache[0].h[static_cast<std::size_t>(p.layers() - 1)].transpose();
  return g;
}

}  // namespace stgl
