#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cbcfog/graph.hpp"

namespace cbcfog {

enum class SyntheticKind { geometric, grid, erdos_renyi };

std::string_view to_string(SyntheticKind kind);
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

/// Seeded synthetic connectivity snapshot.
///
///  - geometric: node_count points uniform in the unit square, linked when
///    their Euclidean distance is at most `density` (the radius).
///  - erdos_renyi: every pair linked with probability `density`.
///  - grid: row-major lattice ceil(sqrt(n)) wide; `density` is ignored.
///
/// Only the largest component is kept (original ids are the generator's
/// point indices), with a warning on stderr when it holds fewer than 95% of
/// the nodes. The origin is the max-degree node. Throws GraphError for
/// node_count < 2 or when no edge is produced.
Topology generate_synthetic_topology(SyntheticKind kind, std::size_t node_count, double density,
                                     std::uint64_t seed);

/// Radius giving roughly the requested mean degree for n points in the unit
/// square, accounting for the border.
double geometric_radius_for_degree(std::size_t node_count, double mean_degree);

} // namespace cbcfog
