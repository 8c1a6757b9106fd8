#pragma once

#include <random>
#include <vector>

#include "stgl/graph.hpp"

namespace stgl {

enum class SampleMode { recent, uniform };

/// The temporal neighborhood of `root` strictly before `query_time`:
/// entries in descending (timestamp, interaction index) order, at most K.
/// Repeated (neighbor, timestamp) pairs are distinct interactions.
struct TemporalNeighborhood {
  NodeId root = 0;
  Time query_time = 0;
  SampleMode mode = SampleMode::recent;
  Direction direction = Direction::bidirected;
  std::vector<AdjEntry> entries;
};

/// Hop-1 at the root plus, per hop-1 entry, a hop-2 neighborhood queried at
/// that entry's interaction time. All root-to-leaf paths have strictly
/// decreasing timestamps.
struct LayeredNeighborhood {
  NodeId root = 0;
  TemporalNeighborhood hop1;
  std::vector<TemporalNeighborhood> hop2;
};

/// K most recent interactions of v strictly before t. Binary search on the
/// time-sorted adjacency, O(log deg + K).
TemporalNeighborhood recent_neighbors(const TemporalGraph& g, NodeId v, Time t, int k,
                                      Direction dir = Direction::bidirected);

/// K interactions drawn uniformly without replacement from all interactions
/// of v before t, then sorted descending. Reproducible for a fixed generator
/// state.
TemporalNeighborhood uniform_neighbors(const TemporalGraph& g, NodeId v, Time t, int k,
                                       Direction dir, std::mt19937_64& rng);

LayeredNeighborhood recent_two_hop(const TemporalGraph& g, NodeId v, Time t, int k1, int k2,
                                   Direction dir = Direction::bidirected);

}  // namespace stgl
