#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cbcfog/catalog.hpp"
#include "cbcfog/centrality.hpp"
#include "cbcfog/graph.hpp"

namespace cbcfog {

struct NodeCache {
  std::vector<ItemRank> common_part;
  std::vector<ItemRank> unique_part;

  std::size_t size() const { return common_part.size() + unique_part.size(); }
};

struct CacheAssignment {
  std::string scheme;
  std::vector<NodeCache> caches;  // indexed by dense node id
  std::vector<NodeId> fog;        // fog members in join order; empty without coordination
  double alpha = 0.0;
  std::size_t buffer_items = 0;

  /// common_part followed by unique_part.
  std::vector<ItemRank> contents(NodeId v) const;
  /// Sorted distinct items cached on any node.
  std::vector<ItemRank> distinct_items() const;
  ContentPlacement as_placement() const;
};

/// Nodes sorted by decreasing raw score, ties to the smaller id.
std::vector<NodeId> rank_by_score(const CentralityScores& scores, std::span<const NodeId> nodes);

/// Fog placement. Nodes are visited in decreasing score order; the first
/// fills floor(alpha * b) slots with the most popular items and every later
/// node replicates that common set. Each node then fills its remaining
/// slots with the most popular items not yet cached anywhere in the fog, and
/// joins the fog. Spare unique capacity stays empty once the catalog runs
/// out. Throws std::invalid_argument for alpha outside [0,1], b == 0 or an
/// empty caching set.
CacheAssignment place_fog(const Topology& topology, const CentralityScores& scores,
                          const ContentCatalog& catalog, std::span<const NodeId> caching_nodes,
                          std::size_t buffer_items, double alpha);

/// Every caching node caches the top-b items; the starting point of the LRU baseline.
CacheAssignment place_greedy_popular(const Topology& topology, const ContentCatalog& catalog,
                                     std::span<const NodeId> caching_nodes,
                                     std::size_t buffer_items);

/// Nodes ranked by score but filling alone, without a shared fog-wide item
/// set: all of them end up with the top-b items and no fog is formed.
CacheAssignment place_noncollaborative(const Topology& topology, const CentralityScores& scores,
                                       const ContentCatalog& catalog,
                                       std::span<const NodeId> caching_nodes,
                                       std::size_t buffer_items);

/// Seeded uniform random fill of b distinct items per caching node, used to
/// bootstrap cbc_exact before any placement exists.
ContentPlacement random_bootstrap_placement(std::size_t node_count, const ContentCatalog& catalog,
                                            std::span<const NodeId> caching_nodes,
                                            std::size_t buffer_items, std::uint64_t seed);

/// CSV "node_id,scheme,slot_index,item_rank,portion".
void write_assignment_csv(std::ostream& out, const CacheAssignment& assignment,
                          const Topology& topology);

} // namespace cbcfog
