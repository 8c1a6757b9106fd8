#pragma once

#include "stgl/graph.hpp"
#include "stgl/sampling.hpp"
#include "stgl/time_encoding.hpp"

namespace stgl {

/// Segment layout of an event feature u = [e_ij(t') || psi(t-t') || x_i || x_j].
/// Empty segments (featureless datasets) are skipped.
struct FeatureLayout {
  int d_e = 0;
  int d_t = 0;
  int d_n = 0;

  int event_dim() const { return d_e + d_t + 2 * d_n; }

  static FeatureLayout from_graph(const TemporalGraph& g, int d_t) {
    return {g.edge_feat_dim(), d_t, g.node_feat_dim()};
  }
};

/// Assembles the event-feature matrix for a neighborhood: one column per
/// entry, in the neighborhood's descending temporal order.
template <typename S>
MatX<S> build_event_features(const TemporalGraph& g, NodeId root, const TemporalNeighborhood& nbr,
                             Time t, const TimeEncoder& enc, const FeatureLayout& layout) {
  if (layout.d_e != g.edge_feat_dim() || layout.d_n != g.node_feat_dim() ||
      layout.d_t != enc.dim())
    throw ValidationError("feature layout does not match graph/encoder dimensions");
  if (nbr.query_time != t) throw ValidationError("neighborhood query time mismatch");

  MatX<S> u(layout.event_dim(), static_cast<Eigen::Index>(nbr.entries.size()));
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const AdjEntry& e = nbr.entries[static_cast<std::size_t>(k)];
    Eigen::Index off = 0;
    if (layout.d_e > 0) {
      u.col(k).segment(off, layout.d_e) = g.edge_feats().row(e.idx).transpose().cast<S>();
      off += layout.d_e;
    }
    if (layout.d_t > 0) {
      VecX<S> psi(layout.d_t);
      enc.encode_into<S>(t - e.t, psi);
      u.col(k).segment(off, layout.d_t) = psi;
      off += layout.d_t;
    }
    if (layout.d_n > 0) {
      u.col(k).segment(off, layout.d_n) = g.node_feats().row(root).transpose().cast<S>();
      off += layout.d_n;
      u.col(k).segment(off, layout.d_n) = g.node_feats().row(e.nbr).transpose().cast<S>();
    }
  }
  return u;
}

}  // namespace stgl
