#include "stgl/sampling.hpp"

#include <algorithm>

namespace stgl {

namespace {

// First adjacency position with timestamp >= t; entries before it are the
// interactions strictly before t.
std::size_t history_end(std::span<const AdjEntry> adj, Time t) {
  const auto it = std::lower_bound(adj.begin(), adj.end(), t,
                                   [](const AdjEntry& e, Time value) { return e.t < value; });
  return static_cast<std::size_t>(it - adj.begin());
}

void check_k(int k) {
  if (k < 1) throw ValidationError("neighbor count K must be >= 1");
}

}  // namespace

TemporalNeighborhood recent_neighbors(const TemporalGraph& g, NodeId v, Time t, int k,
                                      Direction dir) {
  check_k(k);
  const auto adj = g.neighbors(v, dir);
  const std::size_t end = history_end(adj, t);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), end);

  TemporalNeighborhood nbr;
  nbr.root = v;
  nbr.query_time = t;
  nbr.mode = SampleMode::recent;
  nbr.direction = dir;
  nbr.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) nbr.entries.push_back(adj[end - 1 - i]);
  return nbr;
}

TemporalNeighborhood uniform_neighbors(const TemporalGraph& g, NodeId v, Time t, int k,
                                       Direction dir, std::mt19937_64& rng) {
  check_k(k);
  const auto adj = g.neighbors(v, dir);
  const std::size_t end = history_end(adj, t);

  TemporalNeighborhood nbr;
  nbr.root = v;
  nbr.query_time = t;
  nbr.mode = SampleMode::uniform;
  nbr.direction = dir;

  if (end <= static_cast<std::size_t>(k)) {
    nbr.entries.reserve(end);
    for (std::size_t i = 0; i < end; ++i) nbr.entries.push_back(adj[end - 1 - i]);
    return nbr;
  }

  // Partial Fisher-Yates over history indices, without replacement.
  std::vector<std::size_t> pool(end);
  for (std::size_t i = 0; i < end; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), end - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end(), std::greater<>());
  nbr.entries.reserve(pool.size());
  for (std::size_t i : pool) nbr.entries.push_back(adj[i]);
  return nbr;
}

LayeredNeighborhood recent_two_hop(const TemporalGraph& g, NodeId v, Time t, int k1, int k2,
                                   Direction dir) {
  LayeredNeighborhood out;
  out.root = v;
  out.hop1 = recent_neighbors(g, v, t, k1, dir);
  out.hop2.reserve(out.hop1.entries.size());
  for (const AdjEntry& e : out.hop1.entries)
    out.hop2.push_back(recent_neighbors(g, e.nbr, e.t, k2, dir));
  return out;
}

}  // namespace stgl
