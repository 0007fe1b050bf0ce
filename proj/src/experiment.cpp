#include "cbcfog/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "cbcfog/catalog.hpp"
#include "cbcfog/centrality.hpp"
#include "cbcfog/format.hpp"
#include "cbcfog/placement.hpp"
#include "cbcfog/rng.hpp"
#include "cbcfog/simulator.hpp"

namespace cbcfog {

namespace {

constexpr Scheme kSchemes[] = {Scheme::cbc,         Scheme::degree,
                               Scheme::closeness,   Scheme::betweenness,
                               Scheme::eigenvector, Scheme::lru_social_unaware,
                               Scheme::no_fog};

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) {
      comma = text.size();
    }
    auto item = text.substr(pos, comma - pos);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) {
      item.remove_prefix(1);
    }
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) {
      item.remove_suffix(1);
    }
    if (!item.empty()) {
      out.push_back(item);
    }
    pos = comma + 1;
  }
  return out;
}

double parse_real(std::string_view key, std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::string json_to_text(const nlohmann::json& value) {
  if (value.is_string()) {
    return value.get<std::string>();
  }
  if (value.is_array()) {
    std::string out;
    for (const auto& item : value) {
      if (!out.empty()) {
        out += ',';
      }
      out += json_to_text(item);
    }
    return out;
  }
  if (value.is_number_float()) {
    return format_double(value.get<double>());
  }
  return value.dump();
}

struct TopologyContext {
  const Topology* topology = nullptr;
  std::optional<Router> router;
  std::map<Scheme, CentralityScores> classic;
};

struct Job {
  std::size_t topology_index = 0;
  int repetition = 0;
};

ResultRow make_row(const Job& job, const Topology& topo, const ExperimentPlan& plan, Scheme scheme,
                   double alpha, const SimMetrics& metrics, std::uint64_t fingerprint) {
  ResultRow row;
  row.topology_index = job.topology_index;
  row.topology_label = topo.snapshot_label();
  row.scheme = scheme;
  row.alpha = alpha;
  row.repetition = job.repetition;
  row.seed = run_seed(plan.master_seed, job.topology_index, scheme, alpha, job.repetition);
  row.hit_rate = cache_hit_rate(metrics);
  row.success_rate = success_rate(metrics);
  row.pooled_hit_rate = pooled_hit_rate(metrics);
  row.generated = metrics.interests_generated;
  row.cache_satisfied = metrics.satisfied_from_cache;
  row.origin_satisfied = metrics.satisfied_from_origin;
  row.self_satisfied = metrics.satisfied_self;
  row.unsatisfied = metrics.unsatisfied;
  row.workload_fingerprint = fingerprint;
  return row;
}

std::vector<ResultRow> run_job(const Job& job, const TopologyContext& ctx,
                               const ExperimentPlan& plan, const ContentCatalog& catalog) {
  const Topology& topo = *ctx.topology;
  const auto cell = derive_cell_inputs(topo, plan, job.topology_index, job.repetition);
  const std::uint64_t fingerprint = cell.workload.fingerprint();
  const auto& providers = cell.roles.providers;

  // The class fractions do not depend on alpha; compute them once per cell.
  const bool needs_cbc = std::any_of(plan.schemes.begin(), plan.schemes.end(), [](Scheme s) {
    return s == Scheme::cbc || s == Scheme::no_fog;
  });
  ReplicaClassFractions fractions;
  if (needs_cbc) {
    fractions = replica_class_fractions(topo, cell.roles.consumers, providers);
  }

  std::vector<ResultRow> rows;
  for (double alpha : plan.alphas) {
    std::optional<CentralityScores> cbc;
    if (needs_cbc) {
      const auto policy = ReplicationPolicy{alpha, plan.buffer_items, plan.catalog_size}
                              .fit_to_catalog(providers.size());
      cbc = cbc_from_fractions(fractions, policy, providers.size());
    }
    for (Scheme scheme : plan.schemes) {
      const CentralityScores* scores = nullptr;
      if (scheme == Scheme::cbc || scheme == Scheme::no_fog) {
        scores = &*cbc;
      } else if (!uses_lru(scheme)) {
        scores = &ctx.classic.at(scheme);
      }
      const auto assignment =
          place_scheme(topo, scheme, scores, catalog, cell.roles, plan.buffer_items, alpha);
      const auto metrics = run_simulation(*ctx.router, assignment, cell.roles, cell.workload,
                                          catalog.size(), uses_lru(scheme));
      rows.push_back(make_row(job, topo, plan, scheme, alpha, metrics, fingerprint));
    }
  }
  return rows;
}

MetricSummary to_summary(const ResultRow& r) {
  return {r.hit_rate,
          r.success_rate,
          r.pooled_hit_rate,
          static_cast<double>(r.generated),
          static_cast<double>(r.cache_satisfied),
          static_cast<double>(r.origin_satisfied),
          static_cast<double>(r.self_satisfied),
          static_cast<double>(r.unsatisfied)};
}

template <class F>
void for_each_field(MetricSummary& a, const MetricSummary& b, F f) {
  f(a.hit_rate, b.hit_rate);
  f(a.success_rate, b.success_rate);
  f(a.pooled_hit_rate, b.pooled_hit_rate);
  f(a.generated, b.generated);
  f(a.cache_satisfied, b.cache_satisfied);
  f(a.origin_satisfied, b.origin_satisfied);
  f(a.self_satisfied, b.self_satisfied);
  f(a.unsatisfied, b.unsatisfied);
}

} // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::cbc:
    return "cbc";
  case Scheme::degree:
    return "degree";
  case Scheme::closeness:
    return "closeness";
  case Scheme::betweenness:
    return "betweenness";
  case Scheme::eigenvector:
    return "eigenvector";
  case Scheme::lru_social_unaware:
    return "lru_social_unaware";
  case Scheme::no_fog:
    return "no_fog";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kSchemes) {
    if (to_string(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::vector<Scheme> all_schemes() {
  return {std::begin(kSchemes), std::end(kSchemes)};
}

void ExperimentPlan::validate() const {
  if (schemes.empty()) {
    throw ConfigError("schemes: at least one scheme is required");
  }
  if (alphas.empty()) {
    throw ConfigError("alphas: at least one replication factor is required");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError("alphas: " + format_double(a) + " is outside [0, 1]");
    }
  }
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    if (std::find(schemes.begin(), schemes.begin() + static_cast<std::ptrdiff_t>(i), schemes[i]) !=
        schemes.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ConfigError("schemes: '" + std::string(to_string(schemes[i])) + "' listed twice");
    }
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (std::find(alphas.begin(), alphas.begin() + static_cast<std::ptrdiff_t>(i), alphas[i]) !=
        alphas.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ConfigError("alphas: " + format_double(alphas[i]) + " listed twice");
    }
  }
  if (repetitions < 1) {
    throw ConfigError("repetitions: must be at least 1");
  }
  if (buffer_items < 1) {
    throw ConfigError("buffer_items: must be at least 1");
  }
  if (catalog_size < 1) {
    throw ConfigError("catalog_size: must be at least 1");
  }
  if (!(zipf_exponent > 0.0)) {
    throw ConfigError("zipf_exponent: must be positive");
  }
  auto frac_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!frac_ok(consumer_frac) || !frac_ok(provider_frac) ||
      consumer_frac + provider_frac > 1.0 + 1e-12) {
    throw ConfigError("consumer_frac / provider_frac: must lie in [0, 1] and sum to at most 1");
  }
  if (consumer_frac == 0.0 && interests_per_run > 0) {
    throw ConfigError("consumer_frac: interests need at least one consumer");
  }
}

void set_plan_field(ExperimentPlan& plan, std::string_view key, std::string_view value) {
  if (key == "topologies") {
    plan.topology_files.clear();
    for (auto item : split_list(value)) {
      plan.topology_files.emplace_back(item);
    }
  } else if (key == "schemes") {
    plan.schemes.clear();
    for (auto item : split_list(value)) {
      auto s = parse_scheme(item);
      if (!s) {
        throw ConfigError("schemes: unknown scheme '" + std::string(item) + "'");
      }
      plan.schemes.push_back(*s);
    }
  } else if (key == "alphas") {
    plan.alphas.clear();
    for (auto item : split_list(value)) {
      plan.alphas.push_back(parse_real(key, item));
    }
  } else if (key == "repetitions") {
    const auto r = parse_count(key, value);
    if (r > 1'000'000) {
      throw ConfigError("repetitions: too large");
    }
    plan.repetitions = static_cast<int>(r);
  } else if (key == "interests") {
    plan.interests_per_run = parse_count(key, value);
  } else if (key == "buffer_items") {
    plan.buffer_items = parse_count(key, value);
  } else if (key == "catalog_size") {
    plan.catalog_size = parse_count(key, value);
  } else if (key == "zipf_exponent") {
    plan.zipf_exponent = parse_real(key, value);
  } else if (key == "consumer_frac") {
    plan.consumer_frac = parse_real(key, value);
  } else if (key == "provider_frac") {
    plan.provider_frac = parse_real(key, value);
  } else if (key == "master_seed") {
    plan.master_seed = parse_count(key, value);
  } else if (key == "output_dir") {
    plan.output_dir = std::string(value);
  } else {
    throw ConfigError("unknown plan key '" + std::string(key) + "'");
  }
}

ExperimentPlan parse_plan(std::string_view json_text, const std::string& base_dir,
                          const ExperimentPlan& defaults) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object of plan keys");
  }
  ExperimentPlan plan = defaults;
  for (const auto& [key, value] : doc.items()) {
    set_plan_field(plan, key, json_to_text(value));
  }
  if (!base_dir.empty()) {
    for (auto& file : plan.topology_files) {
      if (std::filesystem::path(file).is_relative()) {
        file = (std::filesystem::path(base_dir) / file).lexically_normal().string();
      }
    }
  }
  return plan;
}

ExperimentPlan load_plan(const std::string& path, const ExperimentPlan& defaults) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), std::filesystem::path(path).parent_path().string(), defaults);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t topology_index, Scheme scheme,
                       double alpha, int repetition) {
  const std::string key = "topology=" + std::to_string(topology_index) +
                          "/scheme=" + std::string(to_string(scheme)) +
                          "/alpha=" + format_double(alpha) +
                          "/repetition=" + std::to_string(repetition);
  return derive_seed(master_seed, key);
}

std::uint64_t pairing_seed(std::uint64_t master_seed, std::size_t topology_index, int repetition) {
  return derive_seed(master_seed, "topology=" + std::to_string(topology_index) +
                                      "/repetition=" + std::to_string(repetition));
}

CellInputs derive_cell_inputs(const Topology& topology, const ExperimentPlan& plan,
                              std::size_t topology_index, int repetition) {
  const std::uint64_t paired = pairing_seed(plan.master_seed, topology_index, repetition);
  CellInputs cell;
  cell.roles = assign_roles(topology, plan.consumer_frac, plan.provider_frac,
                            derive_seed(paired, "roles"));
  const auto catalog = ContentCatalog::zipf(plan.catalog_size, plan.zipf_exponent);
  cell.workload = generate_interests(catalog, cell.roles.consumers, plan.interests_per_run,
                                     derive_seed(paired, "workload"));
  return cell;
}

CentralityScores cell_cbc_scores(const Topology& topology, const RoleAssignment& roles,
                                 const ExperimentPlan& plan, double alpha) {
  const auto policy = ReplicationPolicy{alpha, plan.buffer_items, plan.catalog_size}
                          .fit_to_catalog(roles.providers.size());
  return cbc_replication(topology, roles.consumers, policy, roles.providers);
}

std::optional<CentralityScores> scheme_scores(const Topology& topology, Scheme scheme,
                                              const RoleAssignment& roles,
                                              const ExperimentPlan& plan, double alpha) {
  switch (scheme) {
  case Scheme::cbc:
  case Scheme::no_fog:
    return cell_cbc_scores(topology, roles, plan, alpha);
  case Scheme::degree:
    return degree_centrality(topology);
  case Scheme::closeness:
    return closeness_centrality(topology);
  case Scheme::betweenness:
    return betweenness_centrality(topology);
  case Scheme::eigenvector:
    return eigenvector_centrality(topology);
  case Scheme::lru_social_unaware:
    break;
  }
  return std::nullopt;
}

CacheAssignment place_scheme(const Topology& topology, Scheme scheme,
                             const CentralityScores* scores, const ContentCatalog& catalog,
                             const RoleAssignment& roles, std::size_t buffer_items, double alpha) {
  CacheAssignment a;
  if (roles.providers.empty()) {
    a.caches.resize(topology.node_count());
    a.alpha = alpha;
    a.buffer_items = buffer_items;
  } else if (uses_lru(scheme)) {
    a = place_greedy_popular(topology, catalog, roles.providers, buffer_items);
  } else {
    if (scores == nullptr) {
      throw std::invalid_argument("scheme " + std::string(to_string(scheme)) + " needs scores");
    }
    a = scheme == Scheme::no_fog
            ? place_noncollaborative(topology, *scores, catalog, roles.providers, buffer_items)
            : place_fog(topology, *scores, catalog, roles.providers, buffer_items, alpha);
  }
  a.scheme = std::string(to_string(scheme));
  return a;
}

const AggregateRow* ResultTable::find(std::size_t topology_index, Scheme scheme,
                                      double alpha) const {
  for (const auto& a : aggregates) {
    if (a.topology_index == topology_index && a.scheme == scheme && a.alpha == alpha) {
      return &a;
    }
  }
  return nullptr;
}

Topology load_plan_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot read topology file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool has_header = text.find("origin=") != std::string::npos;
  return load_topology(text, has_header ? OriginSpec::from_header() : OriginSpec::automatic(),
                       std::filesystem::path(path).stem().string());
}

ResultTable run_experiment(const ExperimentPlan& plan, unsigned workers) {
  plan.validate();
  if (plan.topology_files.empty()) {
    throw ConfigError("topologies: at least one topology file is required");
  }
  std::vector<Topology> topologies;
  for (const auto& file : plan.topology_files) {
    topologies.push_back(load_plan_topology(file));
  }
  return run_experiment(topologies, plan, workers);
}

std::vector<AggregateRow> aggregate_rows(std::span<const ResultRow> rows) {
  std::vector<AggregateRow> out;
  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin + 1;
    while (end < rows.size() && rows[end].topology_index == rows[begin].topology_index &&
           rows[end].scheme == rows[begin].scheme && rows[end].alpha == rows[begin].alpha) {
      ++end;
    }
    AggregateRow agg;
    agg.topology_index = rows[begin].topology_index;
    agg.topology_label = rows[begin].topology_label;
    agg.scheme = rows[begin].scheme;
    agg.alpha = rows[begin].alpha;
    agg.count = end - begin;
    const auto n = static_cast<double>(agg.count);
    for (std::size_t i = begin; i < end; ++i) {
      for_each_field(agg.mean, to_summary(rows[i]), [](double& acc, double x) { acc += x; });
    }
    for_each_field(agg.mean, agg.mean, [n](double& acc, double) { acc /= n; });
    if (agg.count > 1) {
      for (std::size_t i = begin; i < end; ++i) {
        MetricSummary dev = to_summary(rows[i]);
        for_each_field(dev, agg.mean, [](double& x, double m) { x = (x - m) * (x - m); });
        for_each_field(agg.stddev, dev, [](double& acc, double x) { acc += x; });
      }
      for_each_field(agg.stddev, agg.stddev,
                     [n](double& acc, double) { acc = std::sqrt(acc / (n - 1.0)); });
    }
    out.push_back(std::move(agg));
    begin = end;
  }
  return out;
}

ResultTable run_experiment(std::span<const Topology> topologies, const ExperimentPlan& plan,
                           unsigned workers) {
  plan.validate();
  const auto catalog = ContentCatalog::zipf(plan.catalog_size, plan.zipf_exponent);

  std::vector<TopologyContext> contexts(topologies.size());
  for (std::size_t t = 0; t < topologies.size(); ++t) {
    auto& ctx = contexts[t];
    ctx.topology = &topologies[t];
    ctx.router.emplace(topologies[t]);
    for (Scheme s : plan.schemes) {
      if (ctx.classic.contains(s)) {
        continue;
      }
      switch (s) {
      case Scheme::degree:
        ctx.classic.emplace(s, degree_centrality(topologies[t]));
        break;
      case Scheme::closeness:
        ctx.classic.emplace(s, closeness_centrality(topologies[t]));
        break;
      case Scheme::betweenness:
        ctx.classic.emplace(s, betweenness_centrality(topologies[t]));
        break;
      case Scheme::eigenvector:
        ctx.classic.emplace(s, eigenvector_centrality(topologies[t]));
        break;
      default:
        break;
      }
    }
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < topologies.size(); ++t) {
    for (int r = 0; r < plan.repetitions; ++r) {
      jobs.push_back({t, r});
    }
  }
  std::vector<std::vector<ResultRow>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_job(jobs[j], contexts[jobs[j].topology_index], plan, catalog);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    worker();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  ResultTable table;
  for (const auto& t : topologies) {
    table.topology_labels.push_back(t.snapshot_label());
  }
  table.schemes = plan.schemes;
  table.alphas = plan.alphas;
  for (auto& chunk : results) {
    std::move(chunk.begin(), chunk.end(), std::back_inserter(table.rows));
  }
  auto position = [](const auto& list, auto value) {
    return std::find(list.begin(), list.end(), value) - list.begin();
  };
  std::stable_sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    auto key = [&](const ResultRow& r) {
      return std::tuple(r.topology_index, position(plan.schemes, r.scheme),
                        position(plan.alphas, r.alpha), r.repetition);
    };
    return key(a) < key(b);
  });
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

} // namespace cbcfog
