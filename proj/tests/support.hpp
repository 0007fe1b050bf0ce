#pragma once

// Random instance generators and brute-force oracles shared by the test
// binaries. The oracles work on an adjacency matrix and enumerate simple
// paths exhaustively, so they share no code with the library's BFS.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "cbcfog/graph.hpp"
#include "cbcfog/rng.hpp"

namespace testsupport {

using cbcfog::NodeId;
using AdjMatrix = std::vector<std::vector<char>>;
using Path = std::vector<int>;

struct RandomGraph {
  std::size_t n = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId origin = 0;

  cbcfog::Topology topology() const { return cbcfog::Topology::from_edges(n, edges, origin); }

  AdjMatrix matrix() const {
    AdjMatrix m(n, std::vector<char>(n, 0));
    for (auto [a, b] : edges) {
      m[a][b] = m[b][a] = 1;
    }
    return m;
  }
};

// Graph on [min_nodes, max_nodes] nodes with a per-instance edge density.
// Connectivity is not forced, so disconnected instances show up too.
inline RandomGraph random_graph(cbcfog::Rng& rng, std::size_t min_nodes, std::size_t max_nodes) {
  RandomGraph g;
  g.n = min_nodes + rng.below(max_nodes - min_nodes + 1);
  const double p = 0.2 + 0.6 * rng.uniform01();
  for (NodeId a = 0; a < g.n; ++a) {
    for (NodeId b = a + 1; b < g.n; ++b) {
      if (rng.uniform01() < p) {
        g.edges.emplace_back(a, b);
      }
    }
  }
  g.origin = static_cast<NodeId>(rng.below(g.n));
  return g;
}

// k distinct values from [0, n), sorted.
inline std::vector<NodeId> random_subset(cbcfog::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<NodeId> all(n);
  for (NodeId i = 0; i < n; ++i) {
    all[i] = i;
  }
  rng.shuffle(all);
  all.resize(std::min(k, n));
  std::sort(all.begin(), all.end());
  return all;
}

// Every simple path from s, grouped by end node.
inline std::vector<std::vector<Path>> all_simple_paths(const AdjMatrix& adj, int s) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<Path>> out(n);
  std::vector<char> on_path(n, 0);
  Path path{s};
  on_path[s] = 1;
  auto dfs = [&](auto&& self, int v) -> void {
    out[v].push_back(path);
    for (int w = 0; w < n; ++w) {
      if (adj[v][w] && !on_path[w]) {
        on_path[w] = 1;
        path.push_back(w);
        self(self, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  dfs(dfs, s);
  return out;
}

// Shortest paths from s to each node (empty when unreachable).
inline std::vector<std::vector<Path>> shortest_paths_from(const AdjMatrix& adj, int s) {
  auto paths = all_simple_paths(adj, s);
  for (auto& group : paths) {
    if (group.empty()) {
      continue;
    }
    std::size_t best = group.front().size();
    for (const auto& p : group) {
      best = std::min(best, p.size());
    }
    std::erase_if(group, [&](const Path& p) { return p.size() != best; });
  }
  return paths;
}

// Betweenness over unordered pairs by explicit path counting.
inline std::vector<double> naive_betweenness(const AdjMatrix& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> score(n, 0.0);
  for (int s = 0; s < n; ++s) {
    const auto paths = shortest_paths_from(adj, s);
    for (int t = s + 1; t < n; ++t) {
      if (paths[t].empty()) {
        continue;
      }
      const double total = static_cast<double>(paths[t].size());
      for (const auto& p : paths[t]) {
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
          score[p[i]] += 1.0 / total;
        }
      }
    }
  }
  return score;
}

// Content-based centrality by enumeration: for each consumer and item, the
// shortest paths to the closest holders, counting interior vertices only.
inline std::vector<double> naive_cbc(const AdjMatrix& adj, int origin,
                                     const std::vector<NodeId>& consumers,
                                     const std::vector<std::vector<std::uint32_t>>& placement,
                                     std::size_t catalog_size) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> score(n, 0.0);
  for (NodeId u : consumers) {
    const auto paths = shortest_paths_from(adj, static_cast<int>(u));
    for (std::uint32_t x = 0; x < catalog_size; ++x) {
      auto holds = [&](int v) {
        return v == origin ||
               std::find(placement[v].begin(), placement[v].end(), x) != placement[v].end();
      };
      if (holds(static_cast<int>(u))) {
        continue;
      }
      std::size_t nearest = SIZE_MAX;
      for (int h = 0; h < n; ++h) {
        if (holds(h) && !paths[h].empty()) {
          nearest = std::min(nearest, paths[h].front().size());
        }
      }
      if (nearest == SIZE_MAX) {
        continue;
      }
      std::vector<const Path*> chosen;
      for (int h = 0; h < n; ++h) {
        if (holds(h) && !paths[h].empty() && paths[h].front().size() == nearest) {
          for (const auto& p : paths[h]) {
            chosen.push_back(&p);
          }
        }
      }
      const double total = static_cast<double>(chosen.size());
      for (const Path* p : chosen) {
        for (std::size_t i = 1; i + 1 < p->size(); ++i) {
          score[(*p)[i]] += 1.0 / total;
        }
      }
    }
  }
  return score;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = a.size() == b.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    d = std::max(d, a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  }
  return d;
}

}  // namespace testsupport
