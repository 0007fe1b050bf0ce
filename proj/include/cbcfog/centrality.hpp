#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cbcfog/catalog.hpp"
#include "cbcfog/graph.hpp"

namespace cbcfog {

enum class CentralityKind { degree, closeness, betweenness, eigenvector, cbc_exact, cbc_replication };

std::string_view to_string(CentralityKind kind);
std::optional<CentralityKind> parse_centrality_kind(std::string_view name);

struct CentralityScores {
  CentralityKind kind = CentralityKind::degree;
  std::vector<double> raw;
  std::vector<double> normalized;

  static CentralityScores from_raw(CentralityKind kind, std::vector<double> raw);
};

/// (x - min) / (max - min); all zeros when every value is equal.
std::vector<double> normalize_minmax(std::span<const double> values);

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

CentralityScores degree_centrality(const Topology& topology);

/// reachable(v) / sum of hop distances to the reachable nodes; 0 when isolated.
CentralityScores closeness_centrality(const Topology& topology);

/// Brandes dependency accumulation, summed over unordered pairs.
CentralityScores betweenness_centrality(const Topology& topology);

/// Dominant adjacency eigenvector with unit Euclidean norm. Iterates on
/// A + I so that bipartite graphs converge; the eigenvectors are unchanged.
/// Throws ConvergenceError when max_iter is exhausted and GraphError when the
/// graph has no edges.
CentralityScores eigenvector_centrality(const Topology& topology, double tol = 1e-9,
                                        int max_iter = 10'000);

/// Per-node cached item ranks, indexed by dense node id. The origin holds
/// the whole catalog implicitly and need not be listed.
using ContentPlacement = std::vector<std::vector<ItemRank>>;

/// Content-based centrality from a concrete placement.
///
/// raw(v) sums, over consumers u and items x, the fraction of shortest u->x
/// paths having v as an interior vertex. Paths for (u, x) end at the nearest
/// holders of x (cache or origin); pairs where u holds x or no holder is
/// reachable contribute nothing. Throws std::invalid_argument when the
/// placement names an item outside the catalog.
CentralityScores cbc_exact(const Topology& topology, std::span<const NodeId> consumers,
                           const ContentPlacement& placement, std::size_t catalog_size);

/// Replication rule of the fog: each caching node keeps a common class shared
/// by every caching node and a unique class of its own; anything left is held
/// only by the origin.
struct ReplicationPolicy {
  double alpha = 0.5;
  std::size_t buffer_items = 10;
  std::size_t catalog_size = 100;
  // Caps applied by fit_to_catalog when the nominal classes oversubscribe the catalog.
  std::size_t common_limit = std::numeric_limits<std::size_t>::max();
  std::size_t unique_limit = std::numeric_limits<std::size_t>::max();

  std::size_t common_capacity() const;  // floor(alpha * b)
  std::size_t unique_capacity() const;  // b - floor(alpha * b)

  /// Items held by every caching node; 0 without caching nodes.
  std::size_t common_class_size(std::size_t caching_count) const;
  std::size_t unique_class_size(std::size_t caching_count) const;
  /// Items cached nowhere in the fog.
  std::size_t miss_count(std::size_t caching_count) const;

  /// Throws std::invalid_argument for alpha outside [0,1] or class sizes
  /// that do not fit in the catalog.
  void validate(std::size_t caching_count) const;

  /// Same capacities, with class sizes capped so common + k * unique <= N.
  /// The remaining unique budget is spread evenly (floor) over the k nodes.
  ReplicationPolicy fit_to_catalog(std::size_t caching_count) const;
};

/// Path fractions for one item of each replica class, accumulated over all
/// consumers. unique sums the per-caching-node classes.
struct ReplicaClassFractions {
  std::vector<double> common;
  std::vector<double> unique;
  std::vector<double> miss;
};

ReplicaClassFractions replica_class_fractions(const Topology& topology,
                                              std::span<const NodeId> consumers,
                                              std::span<const NodeId> caching_nodes);

CentralityScores cbc_from_fractions(const ReplicaClassFractions& fractions,
                                    const ReplicationPolicy& policy, std::size_t caching_count);

/// Content-based centrality from the replication rule alone, without knowing
/// which item sits where. Equals cbc_exact on any placement that realizes
/// the same classes.
CentralityScores cbc_replication(const Topology& topology, std::span<const NodeId> consumers,
                                 const ReplicationPolicy& policy,
                                 std::span<const NodeId> caching_nodes);

/// The placement cbc_replication assumes: common class = ranks [0, c),
/// caching_nodes[i] owns the next u ranks in order.
ContentPlacement realize_replica_classes(std::size_t node_count, const ReplicationPolicy& policy,
                                         std::span<const NodeId> caching_nodes);

/// CSV "node_id,kind,raw,normalized", rows by original node id.
void write_scores_csv(std::ostream& out, const CentralityScores& scores, const Topology& topology);

} // namespace cbcfog
