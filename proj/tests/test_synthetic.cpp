#include <doctest.h>

#include "stgl/synthetic.hpp"

using namespace stgl;

TEST_CASE("synthetic: shape, direction and determinism") {
  SyntheticConfig cfg;
  cfg.num_initiators = 20;
  cfg.num_responders = 30;
  cfg.num_edges = 500;
  cfg.seed = 1;
  const TemporalGraph g = make_planted_recency_graph(cfg);

  CHECK(g.num_edges() == 500);
  CHECK(g.num_nodes() <= 50);
  CHECK(g.node_feat_dim() == 8);

  for (const auto& e : g.interactions()) {
    CHECK(e.src < 20);         // initiators fire
    CHECK(e.dst >= 20);        // responders receive
  }
  // timestamps nondecreasing
  for (std::size_t i = 1; i < g.interactions().size(); ++i)
    CHECK(g.interactions()[i].timestamp >= g.interactions()[i - 1].timestamp);

  // node features are unit-norm identity markers
  for (Eigen::Index i = 0; i < g.node_feats().rows(); ++i)
    CHECK(g.node_feats().row(i).norm() == doctest::Approx(1.0));

  const TemporalGraph h = make_planted_recency_graph(cfg);
  CHECK(h.num_edges() == g.num_edges());
  for (std::size_t i = 0; i < g.interactions().size(); ++i) {
    CHECK(h.interactions()[i].src == g.interactions()[i].src);
    CHECK(h.interactions()[i].dst == g.interactions()[i].dst);
    CHECK(h.interactions()[i].timestamp == g.interactions()[i].timestamp);
  }
}

TEST_CASE("synthetic: repeat structure plants a recency pattern") {
  SyntheticConfig cfg;
  cfg.num_initiators = 20;
  cfg.num_responders = 30;
  cfg.num_edges = 2000;
  cfg.repeat_prob = 0.9;
  cfg.background_prob = 0.0;
  cfg.seed = 2;
  const TemporalGraph g = make_planted_recency_graph(cfg);

  // An initiator's next partner usually equals its previous partner.
  std::vector<NodeId> last(20, -1);
  int repeats = 0, total = 0;
  for (const auto& e : g.interactions()) {
    if (last[static_cast<std::size_t>(e.src)] >= 0) {
      ++total;
      if (last[static_cast<std::size_t>(e.src)] == e.dst) ++repeats;
    }
    last[static_cast<std::size_t>(e.src)] = e.dst;
  }
  CHECK(static_cast<double>(repeats) / total > 0.8);

  // featureless variant
  SyntheticConfig plain = cfg;
  plain.node_feat_dim = 0;
  CHECK(make_planted_recency_graph(plain).node_feat_dim() == 0);
}
