#include <doctest.h>

#include <algorithm>

#include "cbcfog/simulator.hpp"
#include "cbcfog/rng.hpp"
#include "support.hpp"

using namespace cbcfog;

namespace {

Topology make(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges,
              NodeId origin) {
  const std::vector<std::pair<NodeId, NodeId>> e(edges);
  return Topology::from_edges(n, e, origin);
}

CacheAssignment empty_assignment(std::size_t n, std::size_t b = 1) {
  CacheAssignment a;
  a.scheme = "test";
  a.caches.resize(n);
  a.buffer_items = b;
  return a;
}

InterestWorkload workload(NodeId consumer, std::initializer_list<ItemRank> items) {
  InterestWorkload w;
  for (ItemRank x : items) {
    w.draws.push_back({consumer, x});
  }
  return w;
}

RoleAssignment roles(std::vector<NodeId> consumers, std::vector<NodeId> providers) {
  RoleAssignment r;
  r.consumers = std::move(consumers);
  r.providers = std::move(providers);
  return r;
}

}  // namespace

TEST_CASE("role assignment") {
  const auto topo = make(11, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}},
                         10);
  const auto passive_only = assign_roles(topo, 0.0, 0.0, 1);
  CHECK(passive_only.consumers.empty());
  CHECK(passive_only.providers.empty());
  CHECK(passive_only.passive.size() == 10);

  const auto all = assign_roles(topo, 1.0, 0.0, 1);
  CHECK(all.consumers.size() == 10);
  CHECK(std::find(all.consumers.begin(), all.consumers.end(), 10u) == all.consumers.end());

  CHECK_THROWS_AS(assign_roles(topo, 0.7, 0.7, 1), std::invalid_argument);
  CHECK_THROWS_AS(assign_roles(topo, -0.1, 0.2, 1), std::invalid_argument);
}

TEST_CASE("ten nodes split three and three under different seeds") {
  const auto topo = make(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}}, 0);
  const auto a = assign_roles(topo, 0.3, 0.3, 1);
  const auto b = assign_roles(topo, 0.3, 0.3, 2);
  CHECK(a.consumers.size() == 3);
  CHECK(a.providers.size() == 3);
  CHECK(b.consumers.size() == 3);
  CHECK(b.providers.size() == 3);
  CHECK((a.consumers != b.consumers || a.providers != b.providers));
  CHECK(assign_roles(topo, 0.3, 0.3, 1).consumers == a.consumers);
}

TEST_CASE("property: roles partition the non-origin nodes") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testsupport::random_graph(rng, 1, 40);
    const auto topo = g.topology();
    const double cf = static_cast<double>(rng.below(6)) / 10.0;
    const double pf = static_cast<double>(rng.below(6)) / 10.0;
    const auto r = assign_roles(topo, cf, pf, rng.next());
    std::vector<int> seen(g.n, 0);
    for (const auto* set : {&r.consumers, &r.providers, &r.passive}) {
      CHECK(std::is_sorted(set->begin(), set->end()));
      for (NodeId v : *set) {
        ++seen[v];
      }
    }
    for (NodeId v = 0; v < g.n; ++v) {
      CHECK(seen[v] == (v == g.origin ? 0 : 1));
    }
  }
}

TEST_CASE("routing on u-v-o") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  CacheState caches(3, 5);
  const Router router(topo);

  const auto miss = router.route(caches, 0, 3);
  CHECK(miss.served_from == ServedFrom::origin);
  CHECK(miss.server == 2);
  CHECK(miss.path == std::vector<NodeId>{0, 1, 2});

  caches.insert_lru(1, 3, 1);
  const auto hit = router.route(caches, 0, 3);
  CHECK(hit.served_from == ServedFrom::cache);
  CHECK(hit.server == 1);
  CHECK(hit.hops() == 1);

  caches.insert_lru(0, 4, 1);
  const auto self = route_interest(topo, caches, 0, 4);
  CHECK(self.served_from == ServedFrom::self);
  CHECK(self.hops() == 0);

  CHECK_THROWS_AS(router.route(caches, 0, 5), std::invalid_argument);
}

TEST_CASE("interests from a component without any holder go unsatisfied") {
  const auto topo = make(4, {{0, 1}, {2, 3}}, 1);
  CacheState caches(4, 2);
  const auto out = route_interest(topo, caches, 2, 0);
  CHECK(out.served_from == ServedFrom::none);

  auto a = empty_assignment(4);
  const auto m = run_simulation(topo, a, roles({2, 0}, {3}), workload(2, {0, 1}), 2, false);
  CHECK(m.unsatisfied == 2);
  CHECK(m.conserved());
  CHECK(success_rate(m) == 0.0);
}

TEST_CASE("nearest holder and next hop ties go to the smaller id") {
  // 0 is the consumer; 1 and 2 both reach 3 (the origin) and both hold item 0
  const auto topo = make(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 3);
  CacheState caches(4, 2);
  caches.insert_lru(2, 0, 1);
  caches.insert_lru(1, 0, 1);
  const Router router(topo);
  CHECK(router.nearest_holder(caches, 0, 0) == NodeId{1});
  const auto via = router.route(caches, 0, 1);
  CHECK(via.path == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("routing counters on u-v-o") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  auto a = empty_assignment(3);
  const auto m = run_simulation(topo, a, roles({0}, {1}), workload(0, {0}), 5, false);
  CHECK(m.per_node[1].forwards == 1);
  CHECK(m.per_node[1].interests_received == 1);
  CHECK(m.per_node[1].cache_responses == 0);
  CHECK(m.per_node[2].origin_responses == 1);
  CHECK(m.satisfied_from_origin == 1);
  CHECK(cache_hit_rate(m) == 0.0);
}

TEST_CASE("empty workload gives all-zero metrics") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  const auto m = run_simulation(topo, empty_assignment(3), roles({0}, {1}), InterestWorkload{}, 5, true);
  CHECK(m.interests_generated == 0);
  CHECK(cache_hit_rate(m) == 0.0);
  CHECK(pooled_hit_rate(m) == 0.0);
  CHECK(success_rate(m) == 0.0);
}

TEST_CASE("a provider holding the whole catalog next to the consumer") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  auto a = empty_assignment(3, 4);
  a.caches[1].common_part = {0, 1, 2, 3};
  const auto m = run_simulation(topo, a, roles({0}, {1}), workload(0, {0, 3, 2, 1, 0}), 4, false);
  CHECK(cache_hit_rate(m) == 1.0);
  CHECK(m.unsatisfied == 0);
  CHECK(m.satisfied_from_cache == 5);
}

TEST_CASE("LRU of capacity one on u-p-o evicts before the repeat") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  const auto m = run_simulation(topo, empty_assignment(3, 1), roles({0}, {1}), workload(0, {0, 1, 0}),
                                2, true);
  CHECK(m.satisfied_from_cache == 0);
  CHECK(m.satisfied_from_origin == 3);
}

TEST_CASE("LRU with room for the catalog hits on the second pass") {
  const auto topo = make(4, {{0, 1}, {1, 2}, {2, 3}}, 3);
  const auto m = run_simulation(topo, empty_assignment(4, 5), roles({0}, {1, 2}),
                                workload(0, {0, 1, 2, 3, 4, 0, 1, 2, 3, 4}), 5, true);
  CHECK(m.satisfied_from_origin == 5);
  CHECK(m.satisfied_from_cache == 5);
}

TEST_CASE("cache hits refresh LRU recency") {
  CacheState c(1, 4);
  c.insert_lru(0, 0, 2);
  c.insert_lru(0, 1, 2);
  c.touch(0, 0);
  c.insert_lru(0, 2, 2);
  CHECK(c.holds(0, 0));
  CHECK_FALSE(c.holds(0, 1));
  CHECK(std::vector<ItemRank>(c.contents(0).begin(), c.contents(0).end()) ==
        std::vector<ItemRank>{2, 0});
  c.insert_lru(0, 3, 0);
  CHECK_FALSE(c.holds(0, 3));
}

TEST_CASE("hit rate metrics") {
  SimMetrics m;
  m.per_node.resize(3);
  m.providers = {0};
  m.per_node[0] = {10, 5, 0, 5};
  CHECK(cache_hit_rate(m) == 0.5);

  m.providers = {0, 1, 2};
  m.per_node[0] = {4, 4, 0, 0};
  m.per_node[1] = {6, 0, 0, 6};
  CHECK(cache_hit_rate(m) == 0.5);
  CHECK(pooled_hit_rate(m) == 0.4);

  SimMetrics quiet;
  quiet.per_node.resize(2);
  quiet.providers = {0, 1};
  CHECK(cache_hit_rate(quiet) == 0.0);
}

TEST_CASE("success rate") {
  SimMetrics m;
  m.interests_generated = 10;
  m.satisfied_from_origin = 10;
  CHECK(success_rate(m) == 1.0);
  m.satisfied_from_origin = 6;
  m.satisfied_from_cache = 1;
  m.unsatisfied = 3;
  CHECK(success_rate(m) == doctest::Approx(0.7));
}

TEST_CASE("draws from non-consumers are rejected") {
  const auto topo = make(3, {{0, 1}, {1, 2}}, 2);
  CHECK_THROWS_AS(run_simulation(topo, empty_assignment(3), roles({0}, {1}), workload(1, {0}), 2, false),
                  std::invalid_argument);
}

TEST_CASE("property: conservation, determinism and static-cache monotonicity") {
  Rng rng(271828);
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = testsupport::random_graph(rng, 2, 14);
    const auto topo = g.topology();
    const auto r = assign_roles(topo, 0.4, 0.4, rng.next());
    if (r.consumers.empty()) {
      continue;
    }
    const std::size_t catalog_n = 1 + rng.below(15);
    const auto catalog = ContentCatalog::zipf(catalog_n);
    const auto w = generate_interests(catalog, r.consumers, 200, rng.next());
    CacheAssignment a = empty_assignment(g.n, 1 + rng.below(4));
    for (NodeId v : r.providers) {
      for (ItemRank x = 0; x < catalog_n; ++x) {
        if (a.caches[v].size() < a.buffer_items && rng.uniform01() < 0.3) {
          a.caches[v].unique_part.push_back(x);
        }
      }
    }
    const Router router(topo);
    for (bool lru : {false, true}) {
      const auto m = run_simulation(router, a, r, w, catalog_n, lru);
      CHECK(m.conserved());
      CHECK(m.interests_generated == w.draws.size());
      CHECK(run_simulation(router, a, r, w, catalog_n, lru) == m);
      CHECK(cache_hit_rate(m) >= 0.0);
      CHECK(cache_hit_rate(m) <= 1.0);
      if (connected_components(topo).size() == 1) {
        CHECK(m.unsatisfied == 0);
      }
    }
    if (r.providers.empty()) {
      continue;
    }
    // Add one item to one provider; static cache hits may only grow.
    const auto before = run_simulation(router, a, r, w, catalog_n, false);
    CacheAssignment more = a;
    const NodeId p = r.providers[rng.below(r.providers.size())];
    const auto x = static_cast<ItemRank>(rng.below(catalog_n));
    if (std::find(more.caches[p].unique_part.begin(), more.caches[p].unique_part.end(), x) ==
        more.caches[p].unique_part.end()) {
      more.caches[p].unique_part.push_back(x);
    }
    const auto after = run_simulation(router, more, r, w, catalog_n, false);
    CHECK(after.satisfied_from_cache >= before.satisfied_from_cache);
  }
}
