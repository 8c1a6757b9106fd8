#include "stgl/synthetic.hpp"

#include <random>
#include <vector>

#include "stgl/rng.hpp"

namespace stgl {

namespace {

// Deterministic unit-norm signature of a node pair.
VecXd pair_signature(NodeId a, NodeId b, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(mix64(seed ^ mix64(static_cast<std::uint64_t>(a) * 0x9e3779b9u +
                                         static_cast<std::uint64_t>(b))));
  std::normal_distribution<double> gauss(0.0, 1.0);
  VecXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
  v.normalize();
  return v;
}

}  // namespace

TemporalGraph make_planted_recency_graph(const SyntheticConfig& cfg) {
  if (cfg.num_initiators < 1 || cfg.num_responders < 2)
    throw ValidationError("need at least one initiator and two responders");

  RunRng rng(cfg.seed);
  auto gen = rng.stream("synthetic");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<NodeId> pick_initiator(0, cfg.num_initiators - 1);
  std::exponential_distribution<double> step(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Zipf-like responder popularity: a uniform negative sample is then
  // usually a cold node, as in real interaction streams.
  std::vector<double> weights(static_cast<std::size_t>(cfg.num_responders));
  for (std::size_t r = 0; r < weights.size(); ++r)
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.popularity_skew);
  std::discrete_distribution<NodeId> responder_rank(weights.begin(), weights.end());
  const auto pick_responder = [&](std::mt19937_64& g) {
    return cfg.num_initiators + responder_rank(g);
  };

  std::vector<NodeId> partner(static_cast<std::size_t>(cfg.num_initiators), -1);
  std::vector<Interaction> events;
  events.reserve(static_cast<std::size_t>(cfg.num_edges));
  MatXd edge_feats(cfg.num_edges, cfg.edge_feat_dim);

  // Warm-up sweep: every responder interacts once up front, so no node in
  // the later stream has an empty history.
  const EdgeId warmup = std::min<EdgeId>(cfg.num_responders, cfg.num_edges);

  Time now = 0;
  for (EdgeId e = 0; e < cfg.num_edges; ++e) {
    NodeId a = pick_initiator(gen);
    NodeId p;
    if (e < warmup) {
      p = cfg.num_initiators + e;  // deterministic responder sweep
    } else if (unit(gen) < cfg.background_prob) {
      p = pick_responder(gen);  // one-off, leaves the pairing untouched
    } else {
      auto& cur = partner[static_cast<std::size_t>(a)];
      if (cur < 0 || unit(gen) > cfg.repeat_prob) cur = pick_responder(gen);
      p = cur;
    }
    // Pair-specific burst rhythm, log-uniform over two decades, keeps the
    // elapsed-time encodings distinctive across examples.
    const double u01 = static_cast<double>(mix64(static_cast<std::uint64_t>(a) * 7919u +
                                                 static_cast<std::uint64_t>(p)) %
                                           4096) /
                       4096.0;
    const double rhythm = std::pow(10.0, 2.0 * u01 - 1.0);
    now += step(gen) * rhythm;
    events.push_back({a, p, now, -1});

    if (cfg.edge_feat_dim > 0) {
      VecXd feat = pair_signature(a, p, cfg.edge_feat_dim, cfg.seed);
      for (int i = 0; i < cfg.edge_feat_dim; ++i) feat[i] += cfg.signature_noise * gauss(gen);
      feat.normalize();
      edge_feats.row(e) = feat.transpose();
    }
  }

  const NodeId num_nodes = cfg.num_initiators + cfg.num_responders;
  MatXd node_feats(0, 0);
  if (cfg.node_feat_dim > 0) {
    auto fgen = rng.stream("synthetic-feats");
    std::normal_distribution<double> fgauss(0.0, 1.0);
    node_feats.resize(num_nodes, cfg.node_feat_dim);
    for (Eigen::Index i = 0; i < node_feats.rows(); ++i) {
      for (Eigen::Index j = 0; j < node_feats.cols(); ++j) node_feats(i, j) = fgauss(fgen);
      node_feats.row(i).normalize();  // random identity directions, norm 1
    }
  }

  return TemporalGraph::from_parts(std::move(events), std::move(node_feats),
                                   std::move(edge_feats));
}

}  // namespace stgl
