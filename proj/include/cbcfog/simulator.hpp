#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbcfog/catalog.hpp"
#include "cbcfog/graph.hpp"
#include "cbcfog/placement.hpp"

namespace cbcfog {

/// Consumer / provider / passive split of the non-origin nodes. Each set is sorted.
struct RoleAssignment {
  std::vector<NodeId> consumers;
  std::vector<NodeId> providers;
  std::vector<NodeId> passive;
  std::uint64_t seed = 0;
};

/// Seeded uniform sampling without replacement; set sizes are
/// round(frac * |V|), capped by the non-origin node count. Throws
/// std::invalid_argument for fractions outside [0,1] or summing above 1.
RoleAssignment assign_roles(const Topology& topology, double consumer_frac, double provider_frac,
                            std::uint64_t seed);

/// Mutable per-node cache contents. Static schemes only read it; the LRU
/// baseline also inserts and evicts.
class CacheState {
public:
  CacheState(std::size_t node_count, std::size_t catalog_size);

  /// Loads every node's contents from an assignment. Recency follows the
  /// listed order: the first item is the most recently used.
  static CacheState from_assignment(const CacheAssignment& assignment, std::size_t catalog_size);

  bool holds(NodeId v, ItemRank x) const { return held_[index(v, x)] != 0; }
  std::span<const ItemRank> contents(NodeId v) const { return recency_.at(v); }
  std::size_t catalog_size() const { return catalog_size_; }
  std::size_t node_count() const { return recency_.size(); }

  /// Moves x to the most-recent position of v's cache. No-op if absent.
  void touch(NodeId v, ItemRank x);
  /// Inserts x as most recent, evicting the least recent item when the
  /// cache already holds `capacity` items. A capacity of 0 caches nothing.
  void insert_lru(NodeId v, ItemRank x, std::size_t capacity);

private:
  std::size_t index(NodeId v, ItemRank x) const {
    return static_cast<std::size_t>(v) * catalog_size_ + x;
  }

  std::size_t catalog_size_ = 0;
  std::vector<char> held_;
  std::vector<std::vector<ItemRank>> recency_;  // front = most recent
};

enum class ServedFrom { self, cache, origin, none };

struct RouteOutcome {
  NodeId server = 0;           // meaningless when served_from == none
  std::vector<NodeId> path;    // consumer first, server last; {consumer} when self-served
  ServedFrom served_from = ServedFrom::none;

  std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

/// Shortest-path interest forwarding toward the nearest holder. Holds the
/// all-pairs distance table of one topology and may be shared across
/// threads. The topology must outlive the router.
class Router {
public:
  explicit Router(const Topology& topology);

  const Topology& topology() const { return *topology_; }
  std::uint32_t distance(NodeId a, NodeId b) const { return dist_(a, b); }

  /// Nearest current holder of item (origin included), ties to the smaller
  /// id; empty if none is reachable.
  std::optional<NodeId> nearest_holder(const CacheState& caches, NodeId from, ItemRank item) const;

  /// Throws std::invalid_argument for an item outside the catalog.
  RouteOutcome route(const CacheState& caches, NodeId consumer, ItemRank item) const;

private:
  const Topology* topology_;
  DistanceTable dist_;
  // Per source: reachable nodes ordered by (distance, id).
  std::vector<std::vector<NodeId>> by_distance_;
};

/// Convenience form that builds a Router for a single lookup.
RouteOutcome route_interest(const Topology& topology, const CacheState& caches, NodeId consumer,
                            ItemRank item);

struct NodeCounters {
  std::uint64_t interests_received = 0;
  std::uint64_t cache_responses = 0;
  std::uint64_t origin_responses = 0;
  std::uint64_t forwards = 0;

  friend bool operator==(const NodeCounters&, const NodeCounters&) = default;
};

struct SimMetrics {
  std::vector<NodeCounters> per_node;
  std::vector<NodeId> providers;  // nodes averaged by cache_hit_rate
  std::uint64_t interests_generated = 0;
  std::uint64_t satisfied_from_cache = 0;
  std::uint64_t satisfied_from_origin = 0;
  std::uint64_t satisfied_self = 0;
  std::uint64_t unsatisfied = 0;

  bool conserved() const {
    return interests_generated ==
           satisfied_from_cache + satisfied_from_origin + satisfied_self + unsatisfied;
  }

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

/// Replays the workload in order. With lru_enabled, every provider on the
/// return path of an origin-served interest inserts the item (LRU eviction
/// at assignment.buffer_items), and cache hits refresh recency. Throws
/// std::logic_error if the conservation identity breaks.
SimMetrics run_simulation(const Router& router, const CacheAssignment& assignment,
                          const RoleAssignment& roles, const InterestWorkload& workload,
                          std::size_t catalog_size, bool lru_enabled);

SimMetrics run_simulation(const Topology& topology, const CacheAssignment& assignment,
                          const RoleAssignment& roles, const InterestWorkload& workload,
                          std::size_t catalog_size, bool lru_enabled);

/// Mean over providers that received interests of responses / received.
double cache_hit_rate(const SimMetrics& metrics);

/// Provider responses / provider interests, pooled over all providers.
double pooled_hit_rate(const SimMetrics& metrics);

/// Fraction of generated interests that reached any copy of the item.
double success_rate(const SimMetrics& metrics);

} // namespace cbcfog
