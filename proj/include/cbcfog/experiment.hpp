#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbcfog/catalog.hpp"
#include "cbcfog/centrality.hpp"
#include "cbcfog/graph.hpp"
#include "cbcfog/placement.hpp"
#include "cbcfog/simulator.hpp"

namespace cbcfog {

/// Invalid plan or configuration input (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { cbc, degree, closeness, betweenness, eigenvector, lru_social_unaware, no_fog };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
std::vector<Scheme> all_schemes();

struct ExperimentPlan {
  std::vector<std::string> topology_files;
  std::vector<Scheme> schemes = all_schemes();
  std::vector<double> alphas = {0.25, 0.5, 0.75};
  int repetitions = 10;
  std::size_t interests_per_run = 10'000;
  std::size_t buffer_items = 10;
  std::size_t catalog_size = 100;
  double zipf_exponent = 1.0;
  double consumer_frac = 0.3;
  double provider_frac = 0.3;
  std::uint64_t master_seed = 1;
  std::string output_dir = "results";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Sets one plan field from text, using the config-file key names
/// (topologies, schemes, alphas, repetitions, interests, buffer_items,
/// catalog_size, zipf_exponent, consumer_frac, provider_frac, master_seed,
/// output_dir). List values are comma separated. Throws ConfigError.
void set_plan_field(ExperimentPlan& plan, std::string_view key, std::string_view value);

/// Reads a JSON object of plan keys on top of `defaults`. Relative topology
/// paths resolve against the config file's directory. Throws ConfigError.
ExperimentPlan load_plan(const std::string& path, const ExperimentPlan& defaults = {});
ExperimentPlan parse_plan(std::string_view json_text, const std::string& base_dir = {},
                          const ExperimentPlan& defaults = {});

/// Seed of one (topology, scheme, alpha, repetition) run.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t topology_index, Scheme scheme,
                       double alpha, int repetition);

/// Seed shared by every scheme and alpha of one (topology, repetition): it
/// drives role assignment and the interest workload so comparisons are paired.
std::uint64_t pairing_seed(std::uint64_t master_seed, std::size_t topology_index, int repetition);

/// Roles and workload of one (topology, repetition), shared by every scheme and alpha.
struct CellInputs {
  RoleAssignment roles;
  InterestWorkload workload;
};

CellInputs derive_cell_inputs(const Topology& topology, const ExperimentPlan& plan,
                              std::size_t topology_index, int repetition);

/// Replication-rule CBC with consumers and providers as the cell's roles.
/// The policy is fitted to the catalog when the providers' unique classes
/// would oversubscribe it.
CentralityScores cell_cbc_scores(const Topology& topology, const RoleAssignment& roles,
                                 const ExperimentPlan& plan, double alpha);

/// Scores used to rank nodes for a scheme; empty for lru_social_unaware.
std::optional<CentralityScores> scheme_scores(const Topology& topology, Scheme scheme,
                                              const RoleAssignment& roles,
                                              const ExperimentPlan& plan, double alpha);

/// Static placement of a scheme over the cell's providers. scores must be
/// present for every scheme except lru_social_unaware.
CacheAssignment place_scheme(const Topology& topology, Scheme scheme,
                             const CentralityScores* scores, const ContentCatalog& catalog,
                             const RoleAssignment& roles, std::size_t buffer_items, double alpha);

/// Only the social-unaware baseline mutates caches at runtime.
inline bool uses_lru(Scheme scheme) { return scheme == Scheme::lru_social_unaware; }

struct ResultRow {
  std::size_t topology_index = 0;
  std::string topology_label;
  Scheme scheme = Scheme::cbc;
  double alpha = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  double hit_rate = 0.0;
  double success_rate = 0.0;
  double pooled_hit_rate = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t cache_satisfied = 0;
  std::uint64_t origin_satisfied = 0;
  std::uint64_t self_satisfied = 0;
  std::uint64_t unsatisfied = 0;
  std::uint64_t workload_fingerprint = 0;
};

/// Mean or sample standard deviation of the numeric ResultRow columns.
struct MetricSummary {
  double hit_rate = 0.0;
  double success_rate = 0.0;
  double pooled_hit_rate = 0.0;
  double generated = 0.0;
  double cache_satisfied = 0.0;
  double origin_satisfied = 0.0;
  double self_satisfied = 0.0;
  double unsatisfied = 0.0;
};

/// One per (topology, scheme, alpha) cell; emitted as a "mean" and a "stddev" CSV row.
struct AggregateRow {
  std::size_t topology_index = 0;
  std::string topology_label;
  Scheme scheme = Scheme::cbc;
  double alpha = 0.0;
  std::size_t count = 0;
  MetricSummary mean;
  MetricSummary stddev;
};

struct ResultTable {
  std::vector<std::string> topology_labels;
  std::vector<Scheme> schemes;
  std::vector<double> alphas;
  std::vector<ResultRow> rows;             // sorted by (topology, scheme, alpha, repetition)
  std::vector<AggregateRow> aggregates;    // sorted by (topology, scheme, alpha)

  const AggregateRow* find(std::size_t topology_index, Scheme scheme, double alpha) const;
};

/// Loads plan.topology_files (origin from the file header when present,
/// else max degree) and runs the plan. Throws ConfigError for an invalid
/// plan and GraphError for unreadable topologies.
ResultTable run_experiment(const ExperimentPlan& plan, unsigned workers = 0);

/// Runs the plan against already-loaded topologies; plan.topology_files is ignored.
/// workers == 0 uses the hardware concurrency. Output does not depend on workers.
ResultTable run_experiment(std::span<const Topology> topologies, const ExperimentPlan& plan,
                           unsigned workers = 0);

Topology load_plan_topology(const std::string& path);

/// Aggregates rows already grouped by cell.
std::vector<AggregateRow> aggregate_rows(std::span<const ResultRow> rows);

} // namespace cbcfog
