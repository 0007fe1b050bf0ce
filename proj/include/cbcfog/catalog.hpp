#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cbcfog/graph.hpp"

namespace cbcfog {

/// 0-based popularity rank; rank 0 is the most popular item.
using ItemRank = std::uint32_t;

/// p_k proportional to k^-exponent for k = 1..n, normalized with a
/// compensated sum. Throws std::invalid_argument for n == 0 or exponent <= 0.
std::vector<double> zipf_popularity(std::size_t n, double exponent);

struct ContentCatalog {
  std::vector<double> popularity;  // descending by rank, sums to 1
  std::vector<double> cumulative;  // prefix sums, back() == 1
  double exponent = 1.0;
  int chunk_kb = 1024;

  static ContentCatalog zipf(std::size_t n, double exponent = 1.0, int chunk_kb = 1024);

  std::size_t size() const { return popularity.size(); }

  /// Inverse-CDF lookup for u in [0, 1).
  ItemRank sample(double u) const;
};

struct Interest {
  NodeId consumer = 0;
  ItemRank item = 0;

  friend bool operator==(const Interest&, const Interest&) = default;
};

struct InterestWorkload {
  std::vector<Interest> draws;
  std::uint64_t seed = 0;

  /// FNV-1a over the draw sequence; equal workloads hash equal.
  std::uint64_t fingerprint() const;
};

/// Each draw picks a consumer uniformly, then an item by popularity.
/// Throws std::invalid_argument for an empty consumer set with count > 0.
InterestWorkload generate_interests(const ContentCatalog& catalog,
                                    std::span<const NodeId> consumers, std::size_t count,
                                    std::uint64_t seed);

/// CSV with header "consumer_id,item_rank"; consumer ids in original-id space.
void write_workload_csv(std::ostream& out, const InterestWorkload& workload,
                        const Topology& topology);
InterestWorkload read_workload_csv(std::istream& in, const Topology& topology,
                                   std::size_t catalog_size);

} // namespace cbcfog
