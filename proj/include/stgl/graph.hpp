#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "stgl/common.hpp"

namespace stgl {

/// One timestamped interaction. Edge features live in a shared matrix on the
/// graph (row = interaction index); label is -1 when absent, else 0/1.
struct Interaction {
  NodeId src = 0;
  NodeId dst = 0;
  Time timestamp = 0;
  int label = -1;
};

enum class Direction { bidirected, directed };

/// Adjacency entry: one interaction seen from one endpoint.
struct AdjEntry {
  NodeId nbr;
  Time t;
  EdgeId idx;
};

struct GraphStats {
  NodeId num_nodes = 0;
  EdgeId num_edges = 0;
  double avg_time_gap = 0.0;
  int d_n = 0;
  int d_e = 0;
  bool has_node_feats = false;
  bool has_edge_feats = false;
};

/// Column mapping for CSV ingestion. Negative index = column absent.
struct CsvSchema {
  int src_col = 0;
  int dst_col = 1;
  int time_col = 2;
  int label_col = -1;
  std::vector<int> feat_cols;

  /// Recognizes the header layout `src,dst,timestamp[,label][,f0..fk]`.
  static CsvSchema infer(const std::vector<std::string>& header);
};

/// Immutable event-sorted interaction store with per-node time-sorted
/// adjacency in both bi-directed and directed forms. Safe to share across
/// concurrent readers once constructed.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  /// Validates, stable-sorts by timestamp and builds both adjacency indexes.
  /// `node_feats` may have zero columns (featureless dataset); rows must
  /// cover every referenced node id when nonzero.
  static TemporalGraph from_parts(std::vector<Interaction> interactions, MatXd node_feats,
                                  MatXd edge_feats);

  const std::vector<Interaction>& interactions() const { return interactions_; }
  const MatXd& node_feats() const { return node_feats_; }
  const MatXd& edge_feats() const { return edge_feats_; }

  NodeId num_nodes() const { return num_nodes_; }
  EdgeId num_edges() const { return static_cast<EdgeId>(interactions_.size()); }
  int node_feat_dim() const { return static_cast<int>(node_feats_.cols()); }
  int edge_feat_dim() const { return static_cast<int>(edge_feats_.cols()); }

  /// Full per-node adjacency, ascending by (timestamp, interaction index).
  std::span<const AdjEntry> neighbors(NodeId v, Direction dir) const;

  /// Distinct nodes that appear as a destination, sorted. Negative link
  /// sampling draws from this universe.
  const std::vector<NodeId>& destination_nodes() const { return dst_universe_; }

  /// True when the input rows were not already in timestamp order.
  bool was_resorted() const { return resorted_; }

  GraphStats stats() const;

  void save_snapshot(const std::filesystem::path& path) const;
  static TemporalGraph load_snapshot(const std::filesystem::path& path);

 private:
  void check_node(NodeId v) const;

  std::vector<Interaction> interactions_;
  MatXd node_feats_;  // |V| x d_n
  MatXd edge_feats_;  // |E| x d_e
  NodeId num_nodes_ = 0;
  bool resorted_ = false;
  std::vector<NodeId> dst_universe_;

  // CSR layout, entries sorted ascending by (t, idx) within each node.
  std::vector<std::size_t> bi_offsets_;
  std::vector<AdjEntry> bi_entries_;
  std::vector<std::size_t> di_offsets_;
  std::vector<AdjEntry> di_entries_;

  friend TemporalGraph normalize_features(const TemporalGraph& g);
};

/// Reads `src,dst,timestamp[,label][,f0..fk]` rows. Non-monotone rows are
/// re-sorted and flagged via was_resorted(). An optional side file
/// `node_feats_path` supplies `node_id,f0..fk` rows.
TemporalGraph ingest_csv(const std::filesystem::path& path, const CsvSchema& schema,
                         const std::optional<std::filesystem::path>& node_feats_path = {});
TemporalGraph ingest_csv(const std::filesystem::path& path);

/// Rescales every node/edge feature vector with l2 norm > 1 to unit norm;
/// returns a new graph, input untouched.
TemporalGraph normalize_features(const TemporalGraph& g);

struct SplitSpec {
  EdgeId train_end_idx = 0;
  EdgeId val_end_idx = 0;
  std::vector<NodeId> inductive_nodes;  // sorted
  std::vector<bool> inductive_mask;     // size |V|
  bool boundary_warning = false;        // a tie block was pushed across a boundary

  bool is_inductive(NodeId v) const {
    return v >= 0 && v < static_cast<NodeId>(inductive_mask.size()) && inductive_mask[v];
  }
};

struct SplitRatios {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
};

/// Index-based chronological split. Boundaries start at floor(train*|E|) and
/// floor((train+val)*|E|) and are advanced so interactions sharing a
/// timestamp never straddle a boundary. Inductive nodes are those absent
/// from the training prefix.
SplitSpec chronological_split(const TemporalGraph& g, const SplitRatios& ratios = {});

}  // namespace stgl
