#include "cbcfog/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "cbcfog/rng.hpp"

namespace cbcfog {

namespace {

using Edge = std::pair<NodeId, NodeId>;

Topology largest_component(std::size_t n, const std::vector<Edge>& edges, std::string label) {
  if (edges.empty()) {
    throw GraphError("synthetic topology parameters produced no edges");
  }
  const auto full = Topology::from_edges(n, edges, 0);
  auto components = connected_components(full);
  // Largest first; ties keep the component with the smallest member.
  const auto& giant = *std::max_element(
      components.begin(), components.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  if (giant.size() < 2) {
    throw GraphError("synthetic topology parameters produced no connected pair");
  }
  if (static_cast<double>(giant.size()) < 0.95 * static_cast<double>(n)) {
    std::cerr << "warning: " << label << ": largest component keeps " << giant.size() << " of "
              << n << " nodes\n";
  }

  std::vector<NodeId> dense(n, kUnreachable);
  std::vector<OriginalId> original;
  for (NodeId v : giant) {
    dense[v] = static_cast<NodeId>(original.size());
    original.push_back(v);
  }
  std::vector<Edge> kept;
  for (auto [a, b] : edges) {
    if (dense[a] != kUnreachable && dense[b] != kUnreachable) {
      kept.emplace_back(dense[a], dense[b]);
    }
  }
  auto topo = Topology::from_edges(giant.size(), kept, 0, std::move(label), std::move(original));
  return topo.with_origin(topo.max_degree_node());
}

} // namespace

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
  case SyntheticKind::geometric:
    return "geometric";
  case SyntheticKind::grid:
    return "grid";
  case SyntheticKind::erdos_renyi:
    return "erdos_renyi";
  }
  return "?";
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  for (auto k : {SyntheticKind::geometric, SyntheticKind::grid, SyntheticKind::erdos_renyi}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

Topology generate_synthetic_topology(SyntheticKind kind, std::size_t node_count, double density,
                                     std::uint64_t seed) {
  if (node_count < 2) {
    throw GraphError("synthetic topology needs at least 2 nodes");
  }
  const std::size_t n = node_count;
  std::vector<Edge> edges;
  Rng rng(seed);
  std::string label = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-s" +
                      std::to_string(seed);

  switch (kind) {
  case SyntheticKind::geometric: {
    if (!(density > 0.0)) {
      throw GraphError("geometric radius must be positive");
    }
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform01();
      ys[i] = rng.uniform01();
    }
    const double r2 = density * density;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        const double dx = xs[i] - xs[j];
        const double dy = ys[i] - ys[j];
        if (dx * dx + dy * dy <= r2) {
          edges.emplace_back(i, j);
        }
      }
    }
    break;
  }
  case SyntheticKind::erdos_renyi: {
    if (!(density >= 0.0 && density <= 1.0)) {
      throw GraphError("erdos_renyi edge probability must lie in [0, 1]");
    }
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (rng.uniform01() < density) {
          edges.emplace_back(i, j);
        }
      }
    }
    break;
  }
  case SyntheticKind::grid: {
    const auto width = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (std::size_t i = 0; i < n; ++i) {
      if ((i + 1) % width != 0 && i + 1 < n) {
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
      }
      if (i + width < n) {
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + width));
      }
    }
    break;
  }
  }
  return largest_component(n, edges, std::move(label));
}

double geometric_radius_for_degree(std::size_t node_count, double mean_degree) {
  // Expected degree in the unit square with border loss:
  //   (n - 1) * (pi r^2 - 8/3 r^3 + r^4 / 2)
  // Solved for r by bisection.
  const double target = mean_degree / static_cast<double>(node_count - 1);
  auto area = [](double r) {
    return std::numbers::pi * r * r - 8.0 / 3.0 * r * r * r + 0.5 * r * r * r * r;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (area(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace cbcfog
