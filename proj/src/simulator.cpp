#include "cbcfog/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cbcfog/rng.hpp"

namespace cbcfog {

RoleAssignment assign_roles(const Topology& topology, double consumer_frac, double provider_frac,
                            std::uint64_t seed) {
  auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!in_unit(consumer_frac) || !in_unit(provider_frac)) {
    throw std::invalid_argument("role fractions must lie in [0, 1]");
  }
  if (consumer_frac + provider_frac > 1.0 + 1e-12) {
    throw std::invalid_argument("consumer and provider fractions sum above 1");
  }
  const std::size_t n = topology.node_count();
  std::vector<NodeId> pool;
  pool.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (v != topology.origin()) {
      pool.push_back(v);
    }
  }
  auto count_for = [&](double frac) {
    return static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  };
  const std::size_t n_consumers = std::min(count_for(consumer_frac), pool.size());
  const std::size_t n_providers = std::min(count_for(provider_frac), pool.size() - n_consumers);

  Rng rng(seed);
  rng.shuffle(pool);

  RoleAssignment roles;
  roles.seed = seed;
  const auto c_end = pool.begin() + static_cast<std::ptrdiff_t>(n_consumers);
  const auto p_end = c_end + static_cast<std::ptrdiff_t>(n_providers);
  roles.consumers.assign(pool.begin(), c_end);
  roles.providers.assign(c_end, p_end);
  roles.passive.assign(p_end, pool.end());
  std::sort(roles.consumers.begin(), roles.consumers.end());
  std::sort(roles.providers.begin(), roles.providers.end());
  std::sort(roles.passive.begin(), roles.passive.end());
  return roles;
}

CacheState::CacheState(std::size_t node_count, std::size_t catalog_size)
    : catalog_size_(catalog_size), held_(node_count * catalog_size, 0), recency_(node_count) {}

CacheState CacheState::from_assignment(const CacheAssignment& assignment,
                                       std::size_t catalog_size) {
  CacheState state(assignment.caches.size(), catalog_size);
  for (NodeId v = 0; v < assignment.caches.size(); ++v) {
    for (ItemRank x : assignment.contents(v)) {
      if (x >= catalog_size) {
        throw std::invalid_argument("assignment caches item " + std::to_string(x) +
                                    " outside the catalog");
      }
      if (!state.holds(v, x)) {
        state.held_[state.index(v, x)] = 1;
        state.recency_[v].push_back(x);
      }
    }
  }
  return state;
}

void CacheState::touch(NodeId v, ItemRank x) {
  auto& order = recency_.at(v);
  auto it = std::find(order.begin(), order.end(), x);
  if (it != order.end()) {
    std::rotate(order.begin(), it, it + 1);
  }
}

void CacheState::insert_lru(NodeId v, ItemRank x, std::size_t capacity) {
  if (capacity == 0) {
    return;
  }
  if (holds(v, x)) {
    touch(v, x);
    return;
  }
  auto& order = recency_.at(v);
  while (order.size() >= capacity) {
    held_[index(v, order.back())] = 0;
    order.pop_back();
  }
  order.insert(order.begin(), x);
  held_[index(v, x)] = 1;
}

Router::Router(const Topology& topology) : topology_(&topology), dist_(topology) {
  const std::size_t n = topology.node_count();
  by_distance_.resize(n);
  for (NodeId s = 0; s < n; ++s) {
    auto& order = by_distance_[s];
    for (NodeId v = 0; v < n; ++v) {
      if (dist_(s, v) != kUnreachable) {
        order.push_back(v);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return dist_(s, a) < dist_(s, b); });
  }
}

std::optional<NodeId> Router::nearest_holder(const CacheState& caches, NodeId from,
                                             ItemRank item) const {
  const NodeId origin = topology_->origin();
  for (NodeId v : by_distance_.at(from)) {
    if (v == origin || caches.holds(v, item)) {
      return v;
    }
  }
  return std::nullopt;
}

RouteOutcome Router::route(const CacheState& caches, NodeId consumer, ItemRank item) const {
  if (item >= caches.catalog_size()) {
    throw std::invalid_argument("item rank " + std::to_string(item) + " outside the catalog");
  }
  if (!topology_->valid(consumer)) {
    throw std::invalid_argument("consumer " + std::to_string(consumer) + " is not in the topology");
  }
  const NodeId origin = topology_->origin();
  auto holds = [&](NodeId v) { return v == origin || caches.holds(v, item); };

  RouteOutcome out;
  out.path.push_back(consumer);
  if (holds(consumer)) {
    out.server = consumer;
    out.served_from = ServedFrom::self;
    return out;
  }
  const auto target = nearest_holder(caches, consumer, item);
  if (!target) {
    out.served_from = ServedFrom::none;
    return out;
  }

  NodeId cur = consumer;
  while (cur != *target) {
    const std::uint32_t remaining = dist_(cur, *target);
    NodeId next = cur;
    for (NodeId w : topology_->neighbors(cur)) {
      if (dist_(w, *target) + 1 == remaining) {
        next = w;  // neighbours are sorted, so this is the smallest id
        break;
      }
    }
    out.path.push_back(next);
    cur = next;
    if (holds(cur)) {
      break;
    }
  }
  out.server = cur;
  out.served_from = cur == origin ? ServedFrom::origin : ServedFrom::cache;
  return out;
}

RouteOutcome route_interest(const Topology& topology, const CacheState& caches, NodeId consumer,
                            ItemRank item) {
  return Router(topology).route(caches, consumer, item);
}

SimMetrics run_simulation(const Router& router, const CacheAssignment& assignment,
                          const RoleAssignment& roles, const InterestWorkload& workload,
                          std::size_t catalog_size, bool lru_enabled) {
  const Topology& topology = router.topology();
  const std::size_t n = topology.node_count();
  if (assignment.caches.size() != n) {
    throw std::invalid_argument("assignment does not match the topology size");
  }
  CacheState caches = CacheState::from_assignment(assignment, catalog_size);

  std::vector<char> is_provider(n, 0);
  std::vector<char> is_consumer(n, 0);
  for (NodeId v : roles.providers) {
    is_provider.at(v) = 1;
  }
  for (NodeId v : roles.consumers) {
    is_consumer.at(v) = 1;
  }

  SimMetrics m;
  m.per_node.resize(n);
  m.providers = roles.providers;
  for (const auto& draw : workload.draws) {
    if (!topology.valid(draw.consumer) || !is_consumer[draw.consumer]) {
      throw std::invalid_argument("workload draw from node " + std::to_string(draw.consumer) +
                                  " which is not a consumer");
    }
    const auto outcome = router.route(caches, draw.consumer, draw.item);
    ++m.interests_generated;
    switch (outcome.served_from) {
    case ServedFrom::self:
      ++m.satisfied_self;
      continue;
    case ServedFrom::none:
      ++m.unsatisfied;
      continue;
    case ServedFrom::cache:
    case ServedFrom::origin:
      break;
    }

    for (std::size_t i = 1; i + 1 < outcome.path.size(); ++i) {
      auto& c = m.per_node[outcome.path[i]];
      ++c.interests_received;
      ++c.forwards;
    }
    auto& server = m.per_node[outcome.server];
    ++server.interests_received;
    if (outcome.served_from == ServedFrom::origin) {
      ++server.origin_responses;
      ++m.satisfied_from_origin;
      if (lru_enabled) {
        for (NodeId v : outcome.path) {
          if (is_provider[v]) {
            caches.insert_lru(v, draw.item, assignment.buffer_items);
          }
        }
      }
    } else {
      ++server.cache_responses;
      ++m.satisfied_from_cache;
      if (lru_enabled) {
        caches.touch(outcome.server, draw.item);
      }
    }
  }
  if (!m.conserved()) {
    throw std::logic_error("simulation lost interests: conservation identity violated");
  }
  return m;
}

SimMetrics run_simulation(const Topology& topology, const CacheAssignment& assignment,
                          const RoleAssignment& roles, const InterestWorkload& workload,
                          std::size_t catalog_size, bool lru_enabled) {
  return run_simulation(Router(topology), assignment, roles, workload, catalog_size, lru_enabled);
}

double cache_hit_rate(const SimMetrics& metrics) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (NodeId v : metrics.providers) {
    const auto& c = metrics.per_node.at(v);
    if (c.interests_received > 0) {
      sum += static_cast<double>(c.cache_responses) / static_cast<double>(c.interests_received);
      ++counted;
    }
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double pooled_hit_rate(const SimMetrics& metrics) {
  std::uint64_t responses = 0;
  std::uint64_t received = 0;
  for (NodeId v : metrics.providers) {
    responses += metrics.per_node.at(v).cache_responses;
    received += metrics.per_node.at(v).interests_received;
  }
  return received == 0 ? 0.0 : static_cast<double>(responses) / static_cast<double>(received);
}

double success_rate(const SimMetrics& metrics) {
  if (metrics.interests_generated == 0) {
    return 0.0;
  }
  const auto reached =
      metrics.satisfied_from_cache + metrics.satisfied_from_origin + metrics.satisfied_self;
  return static_cast<double>(reached) / static_cast<double>(metrics.interests_generated);
}

} // namespace cbcfog
