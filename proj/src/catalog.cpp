#include "cbcfog/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cbcfog/rng.hpp"

namespace cbcfog {

std::vector<double> zipf_popularity(std::size_t n, double exponent) {
  if (n == 0) {
    throw std::invalid_argument("zipf_popularity: catalog size must be at least 1");
  }
  if (!(exponent > 0.0)) {
    throw std::invalid_argument("zipf_popularity: exponent must be positive");
  }
  std::vector<double> weights(n);
  // Neumaier summation; summing the small tail first would also do, but this
  // keeps the weights in rank order.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::pow(static_cast<double>(k + 1), -exponent);
    weights[k] = w;
    const double t = sum + w;
    carry += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  const double total = sum + carry;
  for (auto& w : weights) {
    w /= total;
  }
  return weights;
}

ContentCatalog ContentCatalog::zipf(std::size_t n, double exponent, int chunk_kb) {
  ContentCatalog c;
  c.popularity = zipf_popularity(n, exponent);
  c.exponent = exponent;
  c.chunk_kb = chunk_kb;
  c.cumulative.resize(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += c.popularity[k];
    c.cumulative[k] = acc;
  }
  c.cumulative.back() = 1.0;
  return c;
}

ItemRank ContentCatalog::sample(double u) const {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) {
    --it;
  }
  return static_cast<ItemRank>(it - cumulative.begin());
}

std::uint64_t InterestWorkload::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  feed(draws.size());
  for (const auto& d : draws) {
    feed(d.consumer);
    feed(d.item);
  }
  return h;
}

InterestWorkload generate_interests(const ContentCatalog& catalog,
                                    std::span<const NodeId> consumers, std::size_t count,
                                    std::uint64_t seed) {
  if (consumers.empty() && count > 0) {
    throw std::invalid_argument("generate_interests: no consumers to issue interests");
  }
  if (catalog.size() == 0) {
    throw std::invalid_argument("generate_interests: empty catalog");
  }
  InterestWorkload w;
  w.seed = seed;
  w.draws.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const NodeId consumer = consumers[rng.below(consumers.size())];
    const ItemRank item = catalog.sample(rng.uniform01());
    w.draws.push_back({consumer, item});
  }
  return w;
}

void write_workload_csv(std::ostream& out, const InterestWorkload& workload,
                        const Topology& topology) {
  out << "consumer_id,item_rank\n";
  for (const auto& d : workload.draws) {
    out << topology.original_id(d.consumer) << ',' << d.item << '\n';
  }
}

InterestWorkload read_workload_csv(std::istream& in, const Topology& topology,
                                   std::size_t catalog_size) {
  InterestWorkload w;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || (line_no == 1 && line.starts_with("consumer_id"))) {
      continue;
    }
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) {
        throw std::invalid_argument("missing comma");
      }
      std::size_t used = 0;
      const auto consumer = std::stoull(line.substr(0, comma), &used);
      const auto item = std::stoull(line.substr(comma + 1));
      auto dense = topology.dense_id(consumer);
      if (!dense) {
        throw std::invalid_argument("unknown consumer " + std::to_string(consumer));
      }
      if (item >= catalog_size) {
        throw std::invalid_argument("item rank " + std::to_string(item) + " outside catalog");
      }
      w.draws.push_back({*dense, static_cast<ItemRank>(item)});
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("workload line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return w;
}

} // namespace cbcfog
