#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stgl/graph.hpp"

using namespace stgl;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream os(path);
  os << content;
  return path;
}

TemporalGraph three_row_toy() {
  return ingest_csv(write_temp("toy3.csv",
                               "src,dst,timestamp\n"
                               "0,1,1.0\n"
                               "1,2,2.0\n"
                               "0,1,3.0\n"));
}

}  // namespace

TEST_CASE("ingest: three-row file builds the hand-enumerated adjacency") {
  const TemporalGraph g = three_row_toy();
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 3);

  const auto adj0 = g.neighbors(0, Direction::bidirected);
  REQUIRE(adj0.size() == 2);
  CHECK(adj0[0].nbr == 1);
  CHECK(adj0[0].t == doctest::Approx(1.0));
  CHECK(adj0[1].nbr == 1);
  CHECK(adj0[1].t == doctest::Approx(3.0));

  const auto adj1 = g.neighbors(1, Direction::bidirected);
  REQUIRE(adj1.size() == 3);
  CHECK(adj1[0].nbr == 0);
  CHECK(adj1[1].nbr == 2);
  CHECK(adj1[2].nbr == 0);
  CHECK(adj1[2].t == doctest::Approx(3.0));

  // Directed view only indexes the source side.
  CHECK(g.neighbors(0, Direction::directed).size() == 2);
  CHECK(g.neighbors(1, Direction::directed).size() == 1);
  CHECK(g.neighbors(2, Direction::directed).empty());

  // Bi-directed adjacency has exactly 2|E| entries in total.
  std::size_t total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) total += g.neighbors(v, Direction::bidirected).size();
  CHECK(total == 2 * static_cast<std::size_t>(g.num_edges()));
}

TEST_CASE("ingest: header-only file yields an empty graph") {
  const TemporalGraph g = ingest_csv(write_temp("empty.csv", "src,dst,timestamp\n"));
  CHECK(g.num_edges() == 0);
  CHECK(g.num_nodes() == 0);
}

TEST_CASE("ingest: malformed rows and negative ids are rejected") {
  CHECK_THROWS_AS(ingest_csv(write_temp("bad1.csv", "src,dst,timestamp\n0,notanumber,1\n")),
                  ParseError);
  CHECK_THROWS_AS(ingest_csv(write_temp("bad2.csv", "src,dst,timestamp\n0,-2,1\n")),
                  ValidationError);
  CHECK_THROWS_AS(ingest_csv(write_temp("bad3.csv", "src,dst,timestamp\n0,1\n")), ParseError);
  try {
    ingest_csv(write_temp("bad4.csv", "src,dst,timestamp\n0,1,1\nx,1,2\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("ingest: non-monotone rows are re-sorted with a warning flag") {
  const TemporalGraph g = ingest_csv(write_temp("unsorted.csv",
                                                "src,dst,timestamp\n"
                                                "0,1,5.0\n"
                                                "1,2,1.0\n"));
  CHECK(g.was_resorted());
  CHECK(g.interactions()[0].timestamp == doctest::Approx(1.0));
  CHECK(g.interactions()[1].timestamp == doctest::Approx(5.0));
}

TEST_CASE("ingest: edge features and labels parse into aligned storage") {
  const TemporalGraph g = ingest_csv(write_temp("feat.csv",
                                                "src,dst,timestamp,label,f0,f1\n"
                                                "0,1,1.0,1,0.5,0.25\n"
                                                "1,0,2.0,0,-1.0,2.0\n"));
  CHECK(g.edge_feat_dim() == 2);
  CHECK(g.edge_feats()(1, 1) == doctest::Approx(2.0));
  CHECK(g.interactions()[0].label == 1);
  CHECK(g.interactions()[1].label == 0);
}

TEST_CASE("normalize_features: rescales only vectors with norm above one") {
  std::vector<Interaction> ev = {{0, 1, 1.0, -1}, {1, 2, 2.0, -1}, {0, 2, 3.0, -1}};
  MatXd edge_feats(3, 2);
  edge_feats << 3.0, 4.0,  // norm 5 -> scaled
      0.1, 0.2,            // norm <= 1 -> unchanged
      0.0, 0.0;            // zero vector -> unchanged
  const TemporalGraph g = TemporalGraph::from_parts(ev, MatXd(0, 0), edge_feats);
  const TemporalGraph n = normalize_features(g);

  CHECK(n.edge_feats()(0, 0) == doctest::Approx(0.6));
  CHECK(n.edge_feats()(0, 1) == doctest::Approx(0.8));
  CHECK(n.edge_feats()(1, 0) == doctest::Approx(0.1));
  CHECK(n.edge_feats()(2, 0) == doctest::Approx(0.0));
  // input untouched
  CHECK(g.edge_feats()(0, 0) == doctest::Approx(3.0));

  for (Eigen::Index i = 0; i < n.edge_feats().rows(); ++i)
    CHECK(n.edge_feats().row(i).norm() <= 1.0 + 1e-12);

  MatXd bad = edge_feats;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const TemporalGraph gb = TemporalGraph::from_parts(ev, MatXd(0, 0), bad);
  CHECK_THROWS_AS(normalize_features(gb), ValidationError);
}

TEST_CASE("chronological_split: ratio arithmetic on distinct timestamps") {
  std::vector<Interaction> ev;
  for (int i = 0; i < 100; ++i) ev.push_back({i % 7, 7 + i % 5, static_cast<Time>(i), -1});
  const TemporalGraph g = TemporalGraph::from_parts(ev, MatXd(0, 0), MatXd(0, 0));
  const SplitSpec s = chronological_split(g);
  CHECK(s.train_end_idx == 70);
  CHECK(s.val_end_idx == 85);
  CHECK_FALSE(s.boundary_warning);

  // Boundary timestamps are strictly ordered across splits.
  const auto& iv = g.interactions();
  CHECK(iv[69].timestamp <= iv[70].timestamp);
  CHECK(iv[84].timestamp <= iv[85].timestamp);
}

TEST_CASE("chronological_split: tied timestamps never straddle a boundary") {
  std::vector<Interaction> ev;
  for (int i = 0; i < 10; ++i) ev.push_back({0, 1, 5.0, -1});
  const TemporalGraph g = TemporalGraph::from_parts(ev, MatXd(0, 0), MatXd(0, 0));
  const SplitSpec s = chronological_split(g);
  CHECK(s.train_end_idx == 10);  // whole file lands in train
  CHECK(s.val_end_idx == 10);
  CHECK(s.boundary_warning);
}

TEST_CASE("chronological_split: inductive nodes are those unseen in training") {
  std::vector<Interaction> ev;
  for (int i = 0; i < 90; ++i) ev.push_back({i % 4, 4 + i % 4, static_cast<Time>(i), -1});
  for (int i = 90; i < 100; ++i) ev.push_back({9, 4 + i % 4, static_cast<Time>(i), -1});
  const TemporalGraph g = TemporalGraph::from_parts(ev, MatXd(0, 0), MatXd(0, 0));
  const SplitSpec s = chronological_split(g);
  CHECK(s.is_inductive(9));
  CHECK_FALSE(s.is_inductive(0));
  CHECK(std::find(s.inductive_nodes.begin(), s.inductive_nodes.end(), 9) !=
        s.inductive_nodes.end());
}

TEST_CASE("chronological_split: degenerate inputs are rejected") {
  std::vector<Interaction> ev = {{0, 1, 1.0, -1}, {1, 2, 2.0, -1}};
  const TemporalGraph g = TemporalGraph::from_parts(ev, MatXd(0, 0), MatXd(0, 0));
  CHECK_THROWS_AS(chronological_split(g), ValidationError);

  const TemporalGraph g3 = three_row_toy();
  CHECK_THROWS_AS(chronological_split(g3, SplitRatios{0.5, 0.2, 0.2}), ValidationError);
}

TEST_CASE("snapshot: round-trip yields an identical graph") {
  const TemporalGraph g = ingest_csv(write_temp("rt.csv",
                                                "src,dst,timestamp,label,f0\n"
                                                "0,1,1.0,1,0.5\n"
                                                "2,1,1.0,0,0.25\n"
                                                "0,2,4.0,1,-0.125\n"));
  const auto snap = std::filesystem::temp_directory_path() / "rt.stgl";
  g.save_snapshot(snap);
  const TemporalGraph h = TemporalGraph::load_snapshot(snap);

  REQUIRE(h.num_edges() == g.num_edges());
  CHECK(h.num_nodes() == g.num_nodes());
  for (EdgeId i = 0; i < g.num_edges(); ++i) {
    CHECK(h.interactions()[i].src == g.interactions()[i].src);
    CHECK(h.interactions()[i].dst == g.interactions()[i].dst);
    CHECK(h.interactions()[i].timestamp == g.interactions()[i].timestamp);
    CHECK(h.interactions()[i].label == g.interactions()[i].label);
  }
  CHECK((h.edge_feats() - g.edge_feats()).norm() == 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto a = g.neighbors(v, Direction::bidirected);
    const auto b = h.neighbors(v, Direction::bidirected);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].nbr == b[i].nbr);
      CHECK(a[i].idx == b[i].idx);
    }
  }
  std::filesystem::remove(snap);
}

TEST_CASE("stats: average time gap spans the event range") {
  const TemporalGraph g = three_row_toy();
  const GraphStats s = g.stats();
  CHECK(s.num_nodes == 3);
  CHECK(s.num_edges == 3);
  CHECK(s.avg_time_gap == doctest::Approx(1.0));
  CHECK_FALSE(s.has_node_feats);
}
