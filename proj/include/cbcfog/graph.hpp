#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbcfog {

using NodeId = std::uint32_t;
using OriginalId = std::uint64_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Raised for malformed topology documents and invalid graph arguments.
class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// How load_topology picks the origin node.
struct OriginSpec {
  enum class Mode { automatic, header, explicit_id };

  Mode mode = Mode::automatic;
  OriginalId id = 0;

  static OriginSpec automatic() { return {}; }
  static OriginSpec from_header() { return {Mode::header, 0}; }
  static OriginSpec node(OriginalId id) { return {Mode::explicit_id, id}; }

  /// Accepts "auto", "header" or a non-negative integer.
  static OriginSpec parse(std::string_view text);
};

/// Undirected, unweighted connectivity graph with dense node ids and a
/// designated origin that permanently holds the full catalog.
///
/// Dense ids follow the ascending order of the original ids, so comparing
/// dense ids is the same as comparing original ids.
class Topology {
public:
  Topology() = default;

  /// Builds from dense-id edges. Duplicates are collapsed; self-loops and
  /// out-of-range ids throw. original_ids, when given, must be strictly
  /// increasing and have node_count entries.
  static Topology from_edges(std::size_t node_count,
                             std::span<const std::pair<NodeId, NodeId>> edges,
                             NodeId origin, std::string snapshot_label = {},
                             std::vector<OriginalId> original_ids = {});

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  bool has_edge(NodeId a, NodeId b) const;
  bool valid(NodeId v) const { return v < adjacency_.size(); }

  NodeId origin() const { return origin_; }
  const std::string& snapshot_label() const { return snapshot_label_; }

  OriginalId original_id(NodeId v) const { return original_ids_.at(v); }
  std::optional<NodeId> dense_id(OriginalId original) const;

  Topology with_origin(NodeId origin) const;
  Topology with_label(std::string label) const;

  /// Node with maximum degree, ties to the smallest id.
  NodeId max_degree_node() const;

  friend bool operator==(const Topology&, const Topology&) = default;

private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<OriginalId> original_ids_;
  std::size_t edge_count_ = 0;
  NodeId origin_ = 0;
  std::string snapshot_label_;
};

/// Parses an edge-list document: one "a b" pair per line, '#' comments.
/// A "# nodes=<n> origin=<id>" header supplies the origin for OriginSpec::header.
Topology load_topology(std::string_view text, OriginSpec origin,
                       std::string snapshot_label = {});

Topology read_topology_file(const std::string& path, OriginSpec origin);

/// Inverse of load_topology on connected-by-edges nodes. Isolated nodes
/// cannot be expressed in an edge list and are dropped.
std::string serialize_topology(const Topology& topology);

void write_topology_file(const std::string& path, const Topology& topology);

/// Single-source shortest-path DAG of an unweighted graph.
struct ShortestPathData {
  NodeId source = 0;
  std::vector<std::uint32_t> dist;    // kUnreachable when not reachable
  std::vector<double> sigma;          // number of distinct shortest paths
  std::vector<std::vector<NodeId>> preds;
  std::vector<NodeId> order;          // reachable nodes in non-decreasing dist
};

ShortestPathData bfs_shortest_paths(const Topology& topology, NodeId source);

/// Hop distances only; cheaper than bfs_shortest_paths.
std::vector<std::uint32_t> bfs_distances(const Topology& topology, NodeId source);

/// Components sorted by smallest member; members ascending.
std::vector<std::vector<NodeId>> connected_components(const Topology& topology);

/// All-pairs hop distances, one BFS per source.
class DistanceTable {
public:
  explicit DistanceTable(const Topology& topology);

  std::uint32_t operator()(NodeId from, NodeId to) const {
    return dist_[static_cast<std::size_t>(from) * n_ + to];
  }
  std::size_t node_count() const { return n_; }

private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

} // namespace cbcfog
