#include "cbcfog/placement.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "cbcfog/rng.hpp"

namespace cbcfog {

std::vector<ItemRank> CacheAssignment::contents(NodeId v) const {
  const auto& c = caches.at(v);
  std::vector<ItemRank> out = c.common_part;
  out.insert(out.end(), c.unique_part.begin(), c.unique_part.end());
  return out;
}

std::vector<ItemRank> CacheAssignment::distinct_items() const {
  std::vector<ItemRank> out;
  for (const auto& c : caches) {
    out.insert(out.end(), c.common_part.begin(), c.common_part.end());
    out.insert(out.end(), c.unique_part.begin(), c.unique_part.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ContentPlacement CacheAssignment::as_placement() const {
  ContentPlacement p(caches.size());
  for (NodeId v = 0; v < caches.size(); ++v) {
    p[v] = contents(v);
  }
  return p;
}

std::vector<NodeId> rank_by_score(const CentralityScores& scores, std::span<const NodeId> nodes) {
  std::vector<NodeId> order(nodes.begin(), nodes.end());
  for (NodeId v : order) {
    if (v >= scores.raw.size()) {
      throw std::invalid_argument("node " + std::to_string(v) + " has no score");
    }
  }
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (scores.raw[a] != scores.raw[b]) {
      return scores.raw[a] > scores.raw[b];
    }
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end()), order.end());
  return order;
}

namespace {

void check_nodes(const Topology& topology, std::span<const NodeId> nodes) {
  for (NodeId v : nodes) {
    if (!topology.valid(v)) {
      throw std::invalid_argument("caching node " + std::to_string(v) + " is not in the topology");
    }
  }
}

// Top-b items in the common part of every listed node.
CacheAssignment replicate_top(const Topology& topology, const ContentCatalog& catalog,
                              std::span<const NodeId> nodes, std::size_t buffer_items,
                              std::string scheme) {
  check_nodes(topology, nodes);
  CacheAssignment a;
  a.scheme = std::move(scheme);
  a.caches.resize(topology.node_count());
  a.alpha = 1.0;
  a.buffer_items = buffer_items;
  const std::size_t top = std::min(buffer_items, catalog.size());
  for (NodeId v : nodes) {
    auto& part = a.caches[v].common_part;
    part.clear();
    for (ItemRank x = 0; x < top; ++x) {
      part.push_back(x);
    }
  }
  return a;
}

} // namespace

CacheAssignment place_fog(const Topology& topology, const CentralityScores& scores,
                          const ContentCatalog& catalog, std::span<const NodeId> caching_nodes,
                          std::size_t buffer_items, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("place_fog: alpha must lie in [0, 1]");
  }
  if (buffer_items == 0) {
    throw std::invalid_argument("place_fog: buffer_items must be at least 1");
  }
  if (caching_nodes.empty()) {
    throw std::invalid_argument("place_fog: no caching nodes");
  }
  check_nodes(topology, caching_nodes);

  CacheAssignment a;
  a.scheme = std::string(to_string(scores.kind));
  a.caches.resize(topology.node_count());
  a.alpha = alpha;
  a.buffer_items = buffer_items;

  ReplicationPolicy split{alpha, buffer_items, catalog.size()};
  const std::size_t common_slots = split.common_capacity();
  const std::size_t n_items = catalog.size();

  // Items are visited in rank order, so the fog-wide set X_s is always a
  // prefix [0, next_unused) of the ranks plus the common set, which is
  // itself a prefix. A cursor is enough to track it.
  std::vector<ItemRank> common;
  for (ItemRank x = 0; x < std::min(common_slots, n_items); ++x) {
    common.push_back(x);
  }
  std::size_t next_unused = common.size();

  for (NodeId v : rank_by_score(scores, caching_nodes)) {
    auto& cache = a.caches[v];
    cache.common_part = common;
    const std::size_t unique_slots = buffer_items - cache.common_part.size();
    while (cache.unique_part.size() < unique_slots && next_unused < n_items) {
      cache.unique_part.push_back(static_cast<ItemRank>(next_unused++));
    }
    a.fog.push_back(v);
  }
  return a;
}

CacheAssignment place_greedy_popular(const Topology& topology, const ContentCatalog& catalog,
                                     std::span<const NodeId> caching_nodes,
                                     std::size_t buffer_items) {
  return replicate_top(topology, catalog, caching_nodes, buffer_items, "lru_social_unaware");
}

CacheAssignment place_noncollaborative(const Topology& topology, const CentralityScores& scores,
                                       const ContentCatalog& catalog,
                                       std::span<const NodeId> caching_nodes,
                                       std::size_t buffer_items) {
  // Ranking only fixes the visiting order; with no shared item set every
  // node ends up with the same top-b items.
  const auto order = rank_by_score(scores, caching_nodes);
  return replicate_top(topology, catalog, order, buffer_items, "no_fog");
}

ContentPlacement random_bootstrap_placement(std::size_t node_count, const ContentCatalog& catalog,
                                            std::span<const NodeId> caching_nodes,
                                            std::size_t buffer_items, std::uint64_t seed) {
  ContentPlacement p(node_count);
  Rng rng(seed);
  std::vector<ItemRank> items(catalog.size());
  const std::size_t take = std::min(buffer_items, catalog.size());
  for (NodeId v : caching_nodes) {
    for (ItemRank x = 0; x < items.size(); ++x) {
      items[x] = x;
    }
    // Partial Fisher-Yates: the first `take` slots are a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(items.size() - i));
      std::swap(items[i], items[j]);
    }
    auto& slot = p.at(v);
    slot.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(slot.begin(), slot.end());
  }
  return p;
}

void write_assignment_csv(std::ostream& out, const CacheAssignment& assignment,
                          const Topology& topology) {
  out << "node_id,scheme,slot_index,item_rank,portion\n";
  for (NodeId v = 0; v < assignment.caches.size(); ++v) {
    const auto& c = assignment.caches[v];
    std::size_t slot = 0;
    for (ItemRank x : c.common_part) {
      out << topology.original_id(v) << ',' << assignment.scheme << ',' << slot++ << ',' << x
          << ",common\n";
    }
    for (ItemRank x : c.unique_part) {
      out << topology.original_id(v) << ',' << assignment.scheme << ',' << slot++ << ',' << x
          << ",unique\n";
    }
  }
}

} // namespace cbcfog
