#include "cbcfog/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "cbcfog/format.hpp"

namespace cbcfog {

namespace {

constexpr std::string_view kKindNames[] = {"degree",      "closeness", "betweenness",
                                           "eigenvector", "cbc_exact", "cbc_replication"};

// Adds, for every interior vertex v of the shortest paths from sp.source to
// its nearest holders, weight * sigma(source->v) * paths(v->holders) / total.
class NearestHolderPaths {
public:
  explicit NearestHolderPaths(std::size_t node_count) : to_target_(node_count, 0.0) {}

  template <class IsHolder>
  void accumulate(const Topology& topology, const ShortestPathData& sp, IsHolder is_holder,
                  double weight, std::vector<double>& out) {
    if (is_holder(sp.source)) {
      return;
    }
    std::uint32_t nearest = kUnreachable;
    std::size_t end = 0;
    for (; end < sp.order.size(); ++end) {
      const NodeId v = sp.order[end];
      if (sp.dist[v] > nearest) {
        break;
      }
      if (nearest == kUnreachable && is_holder(v)) {
        nearest = sp.dist[v];
      }
    }
    if (nearest == kUnreachable) {
      return;
    }

    // Count shortest paths from each node to the nearest holders, walking the
    // DAG backwards from the last BFS level.
    for (std::size_t i = end; i-- > 0;) {
      const NodeId v = sp.order[i];
      if (sp.dist[v] == nearest) {
        to_target_[v] = is_holder(v) ? 1.0 : 0.0;
        continue;
      }
      double paths = 0.0;
      for (NodeId w : topology.neighbors(v)) {
        if (sp.dist[w] == sp.dist[v] + 1) {
          paths += to_target_[w];
        }
      }
      to_target_[v] = paths;
    }

    const double total = to_target_[sp.source];
    for (std::size_t i = 1; i < end; ++i) {
      const NodeId v = sp.order[i];
      if (sp.dist[v] >= nearest) {
        break;
      }
      out[v] += weight * sp.sigma[v] * to_target_[v] / total;
    }
  }

private:
  std::vector<double> to_target_;
};

std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes, const Topology& topology,
                                  const char* what) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && !topology.valid(out.back())) {
    throw std::invalid_argument(std::string(what) + " references node " +
                                std::to_string(out.back()) + " outside the topology");
  }
  return out;
}

} // namespace

std::string_view to_string(CentralityKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::optional<CentralityKind> parse_centrality_kind(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kKindNames[i] == name) {
      return static_cast<CentralityKind>(i);
    }
  }
  return std::nullopt;
}

std::vector<double> normalize_minmax(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) {
    return out;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) {
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *lo) / range;
  }
  return out;
}

CentralityScores CentralityScores::from_raw(CentralityKind kind, std::vector<double> raw) {
  CentralityScores s;
  s.kind = kind;
  s.normalized = normalize_minmax(raw);
  s.raw = std::move(raw);
  return s;
}

CentralityScores degree_centrality(const Topology& topology) {
  std::vector<double> raw(topology.node_count());
  for (NodeId v = 0; v < topology.node_count(); ++v) {
    raw[v] = static_cast<double>(topology.degree(v));
  }
  return CentralityScores::from_raw(CentralityKind::degree, std::move(raw));
}

CentralityScores closeness_centrality(const Topology& topology) {
  std::vector<double> raw(topology.node_count(), 0.0);
  for (NodeId v = 0; v < topology.node_count(); ++v) {
    const auto dist = bfs_distances(topology, v);
    std::uint64_t reachable = 0;
    std::uint64_t total = 0;
    for (auto d : dist) {
      if (d != kUnreachable && d > 0) {
        ++reachable;
        total += d;
      }
    }
    raw[v] = total == 0 ? 0.0 : static_cast<double>(reachable) / static_cast<double>(total);
  }
  return CentralityScores::from_raw(CentralityKind::closeness, std::move(raw));
}

CentralityScores betweenness_centrality(const Topology& topology) {
  const std::size_t n = topology.node_count();
  std::vector<double> raw(n, 0.0);
  std::vector<double> delta(n);
  for (NodeId s = 0; s < n; ++s) {
    const auto sp = bfs_shortest_paths(topology, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId p : sp.preds[w]) {
        delta[p] += sp.sigma[p] / sp.sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) {
        raw[w] += delta[w];
      }
    }
  }
  // Every unordered pair was counted from both ends.
  for (auto& r : raw) {
    r /= 2.0;
  }
  return CentralityScores::from_raw(CentralityKind::betweenness, std::move(raw));
}

CentralityScores eigenvector_centrality(const Topology& topology, double tol, int max_iter) {
  if (topology.edge_count() == 0) {
    throw GraphError("eigenvector centrality needs at least one edge");
  }
  const std::size_t n = topology.node_count();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    double norm = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double acc = x[v];
      for (NodeId w : topology.neighbors(v)) {
        acc += x[w];
      }
      next[v] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      next[v] /= norm;
      change = std::max(change, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (change < tol) {
      return CentralityScores::from_raw(CentralityKind::eigenvector, std::move(x));
    }
  }
  throw ConvergenceError("eigenvector centrality did not converge within " +
                         std::to_string(max_iter) + " iterations (tol " + format_double(tol) + ")");
}

CentralityScores cbc_exact(const Topology& topology, std::span<const NodeId> consumers,
                           const ContentPlacement& placement, std::size_t catalog_size) {
  const std::size_t n = topology.node_count();
  if (placement.size() > n) {
    throw std::invalid_argument("placement lists more nodes than the topology has");
  }
  // holder mask per item; the origin holds everything.
  std::vector<std::vector<char>> holds(catalog_size, std::vector<char>(n, 0));
  for (NodeId v = 0; v < placement.size(); ++v) {
    for (ItemRank x : placement[v]) {
      if (x >= catalog_size) {
        throw std::invalid_argument("placement references unknown content id " +
                                    std::to_string(x));
      }
      holds[x][v] = 1;
    }
  }
  for (auto& mask : holds) {
    mask[topology.origin()] = 1;
  }

  std::vector<double> raw(n, 0.0);
  NearestHolderPaths paths(n);
  for (NodeId u : sorted_unique(consumers, topology, "consumer set")) {
    const auto sp = bfs_shortest_paths(topology, u);
    for (std::size_t x = 0; x < catalog_size; ++x) {
      const auto& mask = holds[x];
      paths.accumulate(topology, sp, [&mask](NodeId v) { return mask[v] != 0; }, 1.0, raw);
    }
  }
  return CentralityScores::from_raw(CentralityKind::cbc_exact, std::move(raw));
}

std::size_t ReplicationPolicy::common_capacity() const {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(buffer_items) + 1e-9));
}

std::size_t ReplicationPolicy::unique_capacity() const {
  return buffer_items - std::min(common_capacity(), buffer_items);
}

std::size_t ReplicationPolicy::common_class_size(std::size_t caching_count) const {
  return caching_count == 0 ? 0 : std::min(common_capacity(), common_limit);
}

std::size_t ReplicationPolicy::unique_class_size(std::size_t caching_count) const {
  return caching_count == 0 ? 0 : std::min(unique_capacity(), unique_limit);
}

std::size_t ReplicationPolicy::miss_count(std::size_t caching_count) const {
  const std::size_t cached =
      common_class_size(caching_count) + caching_count * unique_class_size(caching_count);
  return cached >= catalog_size ? 0 : catalog_size - cached;
}

void ReplicationPolicy::validate(std::size_t caching_count) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("replication factor alpha must lie in [0, 1]");
  }
  if (buffer_items == 0) {
    throw std::invalid_argument("buffer_items must be at least 1");
  }
  if (catalog_size == 0) {
    throw std::invalid_argument("catalog_size must be at least 1");
  }
  const std::size_t cached =
      common_class_size(caching_count) + caching_count * unique_class_size(caching_count);
  if (cached > catalog_size) {
    throw std::invalid_argument("replica class sizes (" + std::to_string(cached) +
                                " items) exceed the catalog of " + std::to_string(catalog_size));
  }
}

ReplicationPolicy ReplicationPolicy::fit_to_catalog(std::size_t caching_count) const {
  ReplicationPolicy p = *this;
  p.common_limit = std::min(common_capacity(), catalog_size);
  if (caching_count > 0) {
    p.unique_limit = std::min(unique_capacity(), (catalog_size - p.common_limit) / caching_count);
  }
  return p;
}

ReplicaClassFractions replica_class_fractions(const Topology& topology,
                                              std::span<const NodeId> consumers,
                                              std::span<const NodeId> caching_nodes) {
  const std::size_t n = topology.node_count();
  const auto caching = sorted_unique(caching_nodes, topology, "caching node set");
  std::vector<char> is_caching(n, 0);
  for (NodeId v : caching) {
    is_caching[v] = 1;
  }
  const NodeId origin = topology.origin();

  ReplicaClassFractions f;
  f.common.assign(n, 0.0);
  f.unique.assign(n, 0.0);
  f.miss.assign(n, 0.0);
  NearestHolderPaths paths(n);
  for (NodeId u : sorted_unique(consumers, topology, "consumer set")) {
    const auto sp = bfs_shortest_paths(topology, u);
    paths.accumulate(topology, sp, [&](NodeId v) { return v == origin || is_caching[v] != 0; },
                     1.0, f.common);
    paths.accumulate(topology, sp, [&](NodeId v) { return v == origin; }, 1.0, f.miss);
    for (NodeId w : caching) {
      paths.accumulate(topology, sp, [&](NodeId v) { return v == origin || v == w; }, 1.0,
                       f.unique);
    }
  }
  return f;
}

CentralityScores cbc_from_fractions(const ReplicaClassFractions& fractions,
                                    const ReplicationPolicy& policy, std::size_t caching_count) {
  policy.validate(caching_count);
  const auto common = static_cast<double>(policy.common_class_size(caching_count));
  const auto unique = static_cast<double>(policy.unique_class_size(caching_count));
  const auto miss = static_cast<double>(policy.miss_count(caching_count));
  std::vector<double> raw(fractions.common.size());
  for (std::size_t v = 0; v < raw.size(); ++v) {
    raw[v] = common * fractions.common[v] + unique * fractions.unique[v] + miss * fractions.miss[v];
  }
  return CentralityScores::from_raw(CentralityKind::cbc_replication, std::move(raw));
}

CentralityScores cbc_replication(const Topology& topology, std::span<const NodeId> consumers,
                                 const ReplicationPolicy& policy,
                                 std::span<const NodeId> caching_nodes) {
  const auto caching = sorted_unique(caching_nodes, topology, "caching node set");
  policy.validate(caching.size());
  return cbc_from_fractions(replica_class_fractions(topology, consumers, caching), policy,
                            caching.size());
}

ContentPlacement realize_replica_classes(std::size_t node_count, const ReplicationPolicy& policy,
                                         std::span<const NodeId> caching_nodes) {
  const std::size_t k = caching_nodes.size();
  policy.validate(k);
  const auto common = static_cast<ItemRank>(policy.common_class_size(k));
  const auto unique = static_cast<ItemRank>(policy.unique_class_size(k));
  ContentPlacement placement(node_count);
  ItemRank next = common;
  for (NodeId w : caching_nodes) {
    auto& items = placement.at(w);
    for (ItemRank x = 0; x < common; ++x) {
      items.push_back(x);
    }
    for (ItemRank i = 0; i < unique; ++i) {
      items.push_back(next++);
    }
  }
  return placement;
}

void write_scores_csv(std::ostream& out, const CentralityScores& scores, const Topology& topology) {
  out << "node_id,kind,raw,normalized\n";
  for (NodeId v = 0; v < scores.raw.size(); ++v) {
    out << topology.original_id(v) << ',' << to_string(scores.kind) << ','
        << format_double(scores.raw[v]) << ',' << format_double(scores.normalized[v]) << '\n';
  }
}

} // namespace cbcfog
