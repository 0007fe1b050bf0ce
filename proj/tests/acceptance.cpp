// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cbcfog/catalog.hpp"
#include "cbcfog/centrality.hpp"
#include "cbcfog/experiment.hpp"
#include "cbcfog/format.hpp"
#include "cbcfog/placement.hpp"
#include "cbcfog/report.hpp"
#include "cbcfog/rng.hpp"
#include "cbcfog/simulator.hpp"
#include "support.hpp"

using namespace cbcfog;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// The default plan's results, computed once and shared by criteria 3, 4, 5 and 9.
struct DefaultRun {
  ResultTable table;
  double seconds = 0.0;
};

const DefaultRun& default_run() {
  static const DefaultRun run = [] {
    DefaultRun r;
    const auto start = Clock::now();
    r.table = run_experiment(load_plan(CBCFOG_DEFAULT_CONFIG), 0);
    r.seconds = seconds_since(start);
    return r;
  }();
  return run;
}

double mean_over_alphas(const ResultTable& t, std::size_t topo, Scheme s, bool success) {
  double sum = 0.0;
  for (double a : t.alphas) {
    const auto* agg = t.find(topo, s, a);
    sum += success ? agg->mean.success_rate : agg->mean.hit_rate;
  }
  return sum / static_cast<double>(t.alphas.size());
}

Verdict betweenness_oracle() {
  const auto start = Clock::now();
  Rng rng(0xbe7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = testsupport::random_graph(rng, 2, 8);
    worst = std::max(worst, testsupport::max_abs_diff(betweenness_centrality(g.topology()).raw,
                                                      testsupport::naive_betweenness(g.matrix())));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && secs < 10.0,
          "100 graphs, max |diff| " + format_double(worst) + ", " + fmt(secs, 2) + " s"};
}

Verdict cbc_oracle() {
  const auto start = Clock::now();
  Rng rng(0xcbc);
  double worst_exact = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = testsupport::random_graph(rng, 2, 8);
    const std::size_t catalog = 1 + rng.below(5);
    const auto consumers = testsupport::random_subset(rng, g.n, 1 + rng.below(g.n));
    ContentPlacement placement(g.n);
    for (auto& items : placement) {
      for (ItemRank x = 0; x < catalog; ++x) {
        if (rng.uniform01() < 0.35) {
          items.push_back(x);
        }
      }
    }
    worst_exact = std::max(
        worst_exact,
        testsupport::max_abs_diff(
            cbc_exact(g.topology(), consumers, placement, catalog).raw,
            testsupport::naive_cbc(g.matrix(), static_cast<int>(g.origin), consumers, placement,
                                   catalog)));
  }
  double worst_rule = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto g = testsupport::random_graph(rng, 2, 8);
    const auto topo = g.topology();
    const auto consumers = testsupport::random_subset(rng, g.n, 1 + rng.below(g.n));
    auto caching = testsupport::random_subset(rng, g.n, rng.below(g.n + 1));
    std::erase(caching, g.origin);
    const ReplicationPolicy nominal{static_cast<double>(rng.below(5)) / 4.0, 1 + rng.below(4),
                                    1 + rng.below(12)};
    const auto policy = nominal.fit_to_catalog(caching.size());
    const auto placement = realize_replica_classes(g.n, policy, caching);
    worst_rule = std::max(
        worst_rule,
        testsupport::max_abs_diff(cbc_replication(topo, consumers, policy, caching).raw,
                                  cbc_exact(topo, consumers, placement, policy.catalog_size).raw));
  }
  const double secs = seconds_since(start);
  return {worst_exact <= 1e-9 && worst_rule <= 1e-9 && secs < 30.0,
          "exact vs enumeration max |diff| " + format_double(worst_exact) +
              "; replication vs exact max |diff| " + format_double(worst_rule) + ", " +
              fmt(secs, 2) + " s"};
}

Verdict hit_rate_ordering() {
  const auto& run = default_run();
  const auto& t = run.table;
  int ordered = 0;
  bool doubled = true;
  std::string detail;
  for (std::size_t i = 0; i < t.topology_labels.size(); ++i) {
    const double cbc = mean_over_alphas(t, i, Scheme::cbc, false);
    const double btw = mean_over_alphas(t, i, Scheme::betweenness, false);
    const double nof = mean_over_alphas(t, i, Scheme::no_fog, false);
    const double lru = mean_over_alphas(t, i, Scheme::lru_social_unaware, false);
    ordered += (cbc > btw && btw > nof && nof > lru) ? 1 : 0;
    doubled = doubled && cbc >= 2.0 * lru;
    detail += t.topology_labels[i] + " cbc " + fmt(cbc) + " btw " + fmt(btw) + " nofog " +
              fmt(nof) + " lru " + fmt(lru) + "; ";
  }
  detail += "ordered on " + std::to_string(ordered) + "/3, cbc>=2*lru on all: " +
            (doubled ? "yes" : "no") + ", " + fmt(run.seconds, 1) + " s";
  return {t.topology_labels.size() == 3 && ordered >= 2 && doubled && run.seconds < 300.0, detail};
}

Verdict alpha_peak() {
  const auto& t = default_run().table;
  int peaked = 0;
  std::string detail;
  for (std::size_t i = 0; i < t.topology_labels.size(); ++i) {
    const double lo = t.find(i, Scheme::cbc, 0.25)->mean.hit_rate;
    const double mid = t.find(i, Scheme::cbc, 0.5)->mean.hit_rate;
    const double hi = t.find(i, Scheme::cbc, 0.75)->mean.hit_rate;
    peaked += (mid >= lo && mid >= hi) ? 1 : 0;
    detail += t.topology_labels[i] + " " + fmt(lo) + "/" + fmt(mid) + "/" + fmt(hi) + "; ";
  }
  detail += "peak at 0.5 on " + std::to_string(peaked) + "/3";
  return {peaked >= 2, detail};
}

Verdict success_rate_ordering() {
  const auto& t = default_run().table;
  bool all = t.topology_labels.size() == 3;
  std::string detail;
  for (std::size_t i = 0; i < t.topology_labels.size(); ++i) {
    const double cbc = mean_over_alphas(t, i, Scheme::cbc, true);
    const double lru = mean_over_alphas(t, i, Scheme::lru_social_unaware, true);
    const double nof = mean_over_alphas(t, i, Scheme::no_fog, true);
    all = all && cbc > lru && cbc > nof;
    detail += t.topology_labels[i] + " cbc " + fmt(cbc) + " lru " + fmt(lru) + " nofog " +
              fmt(nof) + "; ";
  }
  return {all, detail + "strictly above both on all 3: " + (all ? "yes" : "no")};
}

double harmonic(int n) {
  double h = 0.0;
  for (int k = n; k >= 1; --k) {
    h += 1.0 / k;
  }
  return h;
}

Verdict zipf() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {std::size_t{1}, std::size_t{100}, std::size_t{1'000'000}}) {
    long double sum = 0.0L;
    for (double p : zipf_popularity(n, 1.0)) {
      sum += p;
    }
    const double err = std::abs(static_cast<double>(sum) - 1.0);
    ok = ok && err <= 1e-12;
    detail += "N=" + std::to_string(n) + " |sum-1| " + format_double(err) + "; ";
  }
  const auto p = zipf_popularity(100, 1.0);
  ok = ok && p[0] / p[1] == 2.0;
  const auto catalog = ContentCatalog::zipf(100);
  const std::vector<NodeId> consumers{0};
  const auto w = generate_interests(catalog, consumers, 100'000, 1);
  std::size_t top = 0;
  for (const auto& d : w.draws) {
    top += d.item == 0 ? 1 : 0;
  }
  const double freq = static_cast<double>(top) / 1e5;
  const double expected = 1.0 / harmonic(100);
  ok = ok && std::abs(freq - expected) <= 0.01;
  detail += "p1/p2 " + format_double(p[0] / p[1]) + "; rank-1 frequency " + fmt(freq) +
            " vs " + fmt(expected);
  return {ok, detail};
}

Verdict placement_structure() {
  bool ok = true;
  // Hand trace: A outranks B, b = 4, alpha = 0.5, six items.
  {
    const std::pair<NodeId, NodeId> edges[] = {{0, 1}, {1, 2}};
    const auto topo = Topology::from_edges(3, edges, 0);
    const auto scores = CentralityScores::from_raw(CentralityKind::cbc_replication, {0, 1, 5});
    const std::vector<NodeId> caching{1, 2};
    const auto a = place_fog(topo, scores, ContentCatalog::zipf(6), caching, 4, 0.5);
    using R = std::vector<ItemRank>;
    ok = ok && a.caches[2].common_part == R{0, 1} && a.caches[2].unique_part == R{2, 3} &&
         a.caches[1].common_part == R{0, 1} && a.caches[1].unique_part == R{4, 5} &&
         a.distinct_items() == R{0, 1, 2, 3, 4, 5};
  }
  Rng rng(0xa1);
  int instances = 0;
  for (; instances < 500; ++instances) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId v = 0; v + 1 < n; ++v) {
      edges.emplace_back(v, v + 1);
    }
    const auto topo = Topology::from_edges(n, edges, 0);
    std::vector<double> raw(n);
    for (double& x : raw) {
      x = static_cast<double>(rng.below(6));
    }
    const auto caching = testsupport::random_subset(rng, n, 1 + rng.below(n));
    const std::size_t catalog_n = 1 + rng.below(120);
    const std::size_t b = 1 + rng.below(15);
    const double alpha = static_cast<double>(rng.below(101)) / 100.0;
    const auto a = place_fog(topo, CentralityScores::from_raw(CentralityKind::degree, raw),
                             ContentCatalog::zipf(catalog_n), caching, b, alpha);
    const auto common = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(b) + 1e-9));
    ok = ok && a.distinct_items().size() == std::min(catalog_n, common + a.fog.size() * (b - common));
    const auto& reference = a.caches[a.fog.front()].common_part;
    std::set<ItemRank> seen(reference.begin(), reference.end());
    for (NodeId v : a.fog) {
      ok = ok && a.caches[v].common_part == reference;
      for (ItemRank x : a.caches[v].unique_part) {
        ok = ok && seen.insert(x).second;
      }
    }
  }
  return {ok, "hand trace plus " + std::to_string(instances) + " random placements"};
}

Verdict determinism() {
  const auto plan = load_plan(CBCFOG_DEFAULT_CONFIG);
  const auto start = Clock::now();
  std::ostringstream a;
  std::ostringstream b;
  write_results_csv(a, run_experiment(plan, 1));
  write_results_csv(b, run_experiment(plan, 4));
  std::ostringstream c;
  write_results_csv(c, default_run().table);
  const bool same = a.str() == b.str() && a.str() == c.str();
  return {same, "1 worker vs 4 workers vs hardware default: " +
                    std::string(same ? "byte-identical" : "DIFFERENT") + " (" +
                    std::to_string(a.str().size()) + " bytes), " + fmt(seconds_since(start), 1) +
                    " s"};
}

Verdict conservation() {
  std::size_t runs = 0;
  bool ok = true;
  for (const auto& row : default_run().table.rows) {
    ++runs;
    ok = ok && row.generated ==
                   row.cache_satisfied + row.origin_satisfied + row.self_satisfied + row.unsatisfied;
  }
  // Disconnected topologies, where some interests cannot be satisfied.
  Rng rng(0xc0);
  std::uint64_t unsatisfied = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g = testsupport::random_graph(rng, 4, 20);
    const auto topo = g.topology();
    const auto roles = assign_roles(topo, 0.4, 0.4, rng.next());
    if (roles.consumers.empty()) {
      continue;
    }
    const auto catalog = ContentCatalog::zipf(1 + rng.below(20));
    const auto w = generate_interests(catalog, roles.consumers, 100, rng.next());
    CacheAssignment assignment;
    assignment.caches.resize(g.n);
    assignment.buffer_items = 1 + rng.below(5);
    if (!roles.providers.empty() && rng.below(2) == 0) {
      assignment = place_greedy_popular(topo, catalog, roles.providers, assignment.buffer_items);
    }
    for (bool lru : {false, true}) {
      const auto m = run_simulation(topo, assignment, roles, w, catalog.size(), lru);
      ++runs;
      unsatisfied += m.unsatisfied;
      ok = ok && m.conserved();
    }
  }
  return {ok && unsatisfied > 0, std::to_string(runs) + " runs, " + std::to_string(unsatisfied) +
                                     " unsatisfied interests on disconnected instances"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"betweenness matches naive enumeration", betweenness_oracle},
      {"content-based centrality matches brute force", cbc_oracle},
      {"hit-rate ordering cbc > betweenness > no_fog > lru", hit_rate_ordering},
      {"cbc hit rate peaks at alpha 0.5", alpha_peak},
      {"cbc success rate above lru and no_fog", success_rate_ordering},
      {"zipf popularity and sampling", zipf},
      {"fog placement structure", placement_structure},
      {"byte-identical reruns across worker counts", determinism},
      {"interest conservation on every run", conservation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
