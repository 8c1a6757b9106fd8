#pragma once

#include <cstdint>

#include "stgl/graph.hpp"

namespace stgl {

/// Planted-recency interaction stream: initiator nodes keep a current
/// responder partner for a geometric number of interactions before
/// re-pairing, each pair bursting with its own characteristic gap and a
/// noisy pair-signature edge feature. The next link of an initiator is
/// therefore predictable from the recent shared history of the pair, which
/// recent/bi-directed sampling exposes and uniform or directed sampling
/// dilutes (old events carry stale partners' signatures).
struct SyntheticConfig {
  NodeId num_initiators = 50;
  NodeId num_responders = 50;
  EdgeId num_edges = 3000;
  int node_feat_dim = 8;     // 0 = featureless
  int edge_feat_dim = 8;     // pair-signature interaction features, 0 = none
  double repeat_prob = 0.9;  // keep the current partner
  double background_prob = 0.15;  // one-off interactions outside the pairing
  double signature_noise = 0.25;
  double popularity_skew = 1.0;  // Zipf exponent for responder popularity, 0 = uniform
  std::uint64_t seed = 0;
};

TemporalGraph make_planted_recency_graph(const SyntheticConfig& cfg);

}  // namespace stgl
