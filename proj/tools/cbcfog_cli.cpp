// cbcfog: content-based centrality toolkit.
//
//   cbcfog topology generate|validate   synthetic snapshots and edge-list checks
//   cbcfog centrality                   per-node scores as CSV
//   cbcfog place                        cache assignment of one scheme as CSV
//   cbcfog simulate                     one simulation run, metrics CSV row
//   cbcfog experiment                   full scheme x topology x alpha plan
//   cbcfog sweep-alpha                  CBC over a grid of replication factors
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "cbcfog/catalog.hpp"
#include "cbcfog/centrality.hpp"
#include "cbcfog/experiment.hpp"
#include "cbcfog/format.hpp"
#include "cbcfog/graph.hpp"
#include "cbcfog/placement.hpp"
#include "cbcfog/report.hpp"
#include "cbcfog/simulator.hpp"
#include "cbcfog/synthetic.hpp"

namespace {

using namespace cbcfog;

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) {
        throw std::runtime_error("cannot write '" + path + "'");
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

// Parameters shared by the single-run subcommands. They mirror the plan keys
// so a single run reproduces repetition `repetition` of topology 0 in an
// experiment with the same settings.
struct RunOptions {
  std::string topology_path;
  std::string origin = "auto";
  std::map<std::string, std::string> plan_fields;
  int repetition = 0;

  void add(CLI::App* app) {
    app->add_option("--topology,-t", topology_path, "Edge-list topology file")->required();
    app->add_option("--origin", origin, "Origin node: auto, header or an original node id")
        ->capture_default_str();
    add_plan_options(app);
    app->add_option("--repetition", repetition, "Repetition index used to derive roles/workload")
        ->capture_default_str();
  }

  void add_plan_options(CLI::App* app) {
    static const std::pair<const char*, const char*> kKeys[] = {
        {"alpha", "Replication factor (single value)"},
        {"buffer_items", "Cache slots per caching node"},
        {"catalog_size", "Number of content items"},
        {"zipf_exponent", "Zipf popularity exponent"},
        {"consumer_frac", "Fraction of nodes issuing interests"},
        {"provider_frac", "Fraction of caching-enabled nodes"},
        {"master_seed", "Master seed"},
        {"interests", "Interests per run"},
    };
    for (auto [key, help] : kKeys) {
      std::string flag = std::string("--") + key;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      app->add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { plan_fields[k] = v; }, help);
    }
  }

  Topology load() const {
    OriginSpec spec;
    try {
      spec = OriginSpec::parse(origin);
    } catch (const GraphError& e) {
      throw ConfigError(e.what());
    }
    return read_topology_file(topology_path, spec);
  }

  ExperimentPlan plan() const {
    ExperimentPlan p;
    p.alphas = {0.5};
    if (repetition < 0) {
      throw ConfigError("repetition must be non-negative");
    }
    p.repetitions = repetition + 1;
    for (const auto& [k, v] : plan_fields) {
      if (k == "alpha") {
        set_plan_field(p, "alphas", v);
        if (p.alphas.size() != 1) {
          throw ConfigError("--alpha takes a single value");
        }
      } else {
        set_plan_field(p, k, v);
      }
    }
    p.validate();
    return p;
  }
};

Scheme require_scheme(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) {
    throw ConfigError("unknown scheme '" + name + "'");
  }
  return *s;
}

int cmd_topology_generate(const std::string& kind_name, std::size_t nodes,
                          std::optional<double> density, std::optional<double> mean_degree,
                          std::uint64_t seed, const std::string& label, const std::string& out) {
  auto kind = parse_synthetic_kind(kind_name);
  if (!kind) {
    throw ConfigError("unknown topology kind '" + kind_name + "'");
  }
  double d = 0.0;
  if (density) {
    d = *density;
  } else if (*kind == SyntheticKind::geometric) {
    d = geometric_radius_for_degree(nodes, mean_degree.value_or(6.0));
  } else if (*kind == SyntheticKind::erdos_renyi) {
    d = mean_degree.value_or(6.0) / static_cast<double>(nodes - 1);
  }
  auto topo = generate_synthetic_topology(*kind, nodes, d, seed);
  if (!label.empty()) {
    topo = topo.with_label(label);
  }
  Output o(out);
  o.stream() << serialize_topology(topo);
  std::cerr << topo.snapshot_label() << ": " << topo.node_count() << " nodes, "
            << topo.edge_count() << " edges, mean degree "
            << format_double(2.0 * static_cast<double>(topo.edge_count()) /
                             static_cast<double>(topo.node_count()))
            << ", origin " << topo.original_id(topo.origin()) << '\n';
  return 0;
}

int cmd_topology_validate(const std::string& path, const std::string& origin) {
  OriginSpec spec;
  try {
    spec = OriginSpec::parse(origin);
  } catch (const GraphError& e) {
    throw ConfigError(e.what());
  }
  const auto topo = read_topology_file(path, spec);
  const auto components = connected_components(topo);
  std::cout << "nodes=" << topo.node_count() << " edges=" << topo.edge_count()
            << " origin=" << topo.original_id(topo.origin())
            << " components=" << components.size() << '\n';
  if (components.size() > 1) {
    std::cerr << "warning: topology is disconnected; interests from components without the "
                 "origin may go unsatisfied\n";
  }
  return 0;
}

int cmd_centrality(const RunOptions& opts, const std::string& kind_name,
                   std::optional<std::uint64_t> bootstrap_seed, const std::string& out) {
  auto kind = parse_centrality_kind(kind_name);
  if (!kind) {
    throw ConfigError("unknown centrality kind '" + kind_name + "'");
  }
  const auto plan = opts.plan();
  const auto topo = opts.load();
  std::optional<CentralityScores> scores;
  switch (*kind) {
  case CentralityKind::degree:
    scores = degree_centrality(topo);
    break;
  case CentralityKind::closeness:
    scores = closeness_centrality(topo);
    break;
  case CentralityKind::betweenness:
    scores = betweenness_centrality(topo);
    break;
  case CentralityKind::eigenvector:
    scores = eigenvector_centrality(topo);
    break;
  case CentralityKind::cbc_replication: {
    const auto cell = derive_cell_inputs(topo, plan, 0, opts.repetition);
    scores = cell_cbc_scores(topo, cell.roles, plan, plan.alphas.front());
    break;
  }
  case CentralityKind::cbc_exact: {
    // Bootstrap: random fill of the providers' caches.
    const auto cell = derive_cell_inputs(topo, plan, 0, opts.repetition);
    const auto catalog = ContentCatalog::zipf(plan.catalog_size, plan.zipf_exponent);
    const auto placement =
        random_bootstrap_placement(topo.node_count(), catalog, cell.roles.providers,
                                   plan.buffer_items, bootstrap_seed.value_or(plan.master_seed));
    scores = cbc_exact(topo, cell.roles.consumers, placement, plan.catalog_size);
    break;
  }
  }
  Output o(out);
  write_scores_csv(o.stream(), *scores, topo);
  return 0;
}

int cmd_place(const RunOptions& opts, const std::string& scheme_name, const std::string& out) {
  const Scheme scheme = require_scheme(scheme_name);
  const auto plan = opts.plan();
  const auto topo = opts.load();
  const double alpha = plan.alphas.front();
  const auto cell = derive_cell_inputs(topo, plan, 0, opts.repetition);
  const auto catalog = ContentCatalog::zipf(plan.catalog_size, plan.zipf_exponent);
  const auto scores = scheme_scores(topo, scheme, cell.roles, plan, alpha);
  const auto assignment = place_scheme(topo, scheme, scores ? &*scores : nullptr, catalog,
                                       cell.roles, plan.buffer_items, alpha);
  Output o(out);
  write_assignment_csv(o.stream(), assignment, topo);
  return 0;
}

int cmd_simulate(const RunOptions& opts, const std::string& scheme_name,
                 const std::string& workload_in, const std::string& workload_out,
                 const std::string& out) {
  const Scheme scheme = require_scheme(scheme_name);
  const auto plan = opts.plan();
  const auto topo = opts.load();
  const double alpha = plan.alphas.front();
  auto cell = derive_cell_inputs(topo, plan, 0, opts.repetition);
  const auto catalog = ContentCatalog::zipf(plan.catalog_size, plan.zipf_exponent);
  if (!workload_in.empty()) {
    std::ifstream in(workload_in);
    if (!in) {
      throw std::runtime_error("cannot read workload '" + workload_in + "'");
    }
    cell.workload = read_workload_csv(in, topo, catalog.size());
  }
  if (!workload_out.empty()) {
    Output w(workload_out);
    write_workload_csv(w.stream(), cell.workload, topo);
  }
  const auto scores = scheme_scores(topo, scheme, cell.roles, plan, alpha);
  const auto assignment = place_scheme(topo, scheme, scores ? &*scores : nullptr, catalog,
                                       cell.roles, plan.buffer_items, alpha);
  const auto metrics =
      run_simulation(topo, assignment, cell.roles, cell.workload, catalog.size(), uses_lru(scheme));

  ResultTable table;
  table.topology_labels = {topo.snapshot_label()};
  table.schemes = {scheme};
  table.alphas = {alpha};
  ResultRow row;
  row.topology_label = topo.snapshot_label();
  row.scheme = scheme;
  row.alpha = alpha;
  row.repetition = opts.repetition;
  row.seed = run_seed(plan.master_seed, 0, scheme, alpha, opts.repetition);
  row.hit_rate = cache_hit_rate(metrics);
  row.success_rate = success_rate(metrics);
  row.pooled_hit_rate = pooled_hit_rate(metrics);
  row.generated = metrics.interests_generated;
  row.cache_satisfied = metrics.satisfied_from_cache;
  row.origin_satisfied = metrics.satisfied_from_origin;
  row.self_satisfied = metrics.satisfied_self;
  row.unsatisfied = metrics.unsatisfied;
  table.rows = {row};
  table.aggregates = aggregate_rows(table.rows);
  Output o(out);
  write_results_csv(o.stream(), table);
  return 0;
}

struct PlanOptions {
  std::string config;
  std::map<std::string, std::string> overrides;
  unsigned jobs = 0;
  bool no_gnuplot = false;

  void add(CLI::App* app) {
    app->add_option("--config,-c", config, "JSON plan file");
    for (const char* key : {"topologies", "schemes", "alphas", "repetitions", "interests",
                            "buffer_items", "catalog_size", "zipf_exponent", "consumer_frac",
                            "provider_frac", "master_seed", "output_dir"}) {
      std::string flag = std::string("--") + key;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      app->add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { overrides[k] = v; },
          std::string("Override plan key ") + key);
    }
    app->add_option("--jobs,-j", jobs, "Worker threads (0 = all cores)")->capture_default_str();
    app->add_flag("--no-gnuplot", no_gnuplot, "Skip gnuplot data files");
  }

  ExperimentPlan plan(const ExperimentPlan& defaults) const {
    ExperimentPlan p = config.empty() ? defaults : load_plan(config, defaults);
    for (const auto& [k, v] : overrides) {
      set_plan_field(p, k, v);
    }
    p.validate();
    return p;
  }
};

int cmd_experiment(const PlanOptions& opts, const ExperimentPlan& defaults) {
  const auto plan = opts.plan(defaults);
  const auto table = run_experiment(plan, opts.jobs);
  emit_report(table, plan.output_dir, !opts.no_gnuplot);
  std::cout << format_summary(table);
  std::cerr << "wrote " << table.rows.size() << " runs to " << plan.output_dir << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-based centrality fog caching toolkit"};
  app.require_subcommand(1);

  auto* topology = app.add_subcommand("topology", "Generate or validate topologies");
  topology->require_subcommand(1);
  std::string kind = "geometric";
  std::size_t nodes = 300;
  std::optional<double> density;
  std::optional<double> mean_degree;
  std::uint64_t topo_seed = 1;
  std::string label;
  std::string out;
  auto* generate = topology->add_subcommand("generate", "Seeded synthetic topology");
  generate->add_option("--kind", kind, "geometric, grid or erdos_renyi")->capture_default_str();
  generate->add_option("--nodes,-n", nodes, "Node count")->capture_default_str();
  generate->add_option("--density", density,
                       "Radius (geometric) or edge probability (erdos_renyi)");
  generate->add_option("--mean-degree", mean_degree,
                       "Target mean degree when --density is not given (default 6)");
  generate->add_option("--seed", topo_seed, "Generator seed")->capture_default_str();
  generate->add_option("--label", label, "Snapshot label");
  generate->add_option("--output,-o", out, "Output file (default stdout)");

  std::string validate_path;
  std::string validate_origin = "auto";
  auto* validate = topology->add_subcommand("validate", "Load and check an edge-list file");
  validate->add_option("file", validate_path, "Edge-list file")->required();
  validate->add_option("--origin", validate_origin, "auto, header or node id")
      ->capture_default_str();

  RunOptions run_opts;
  std::string centrality_kind = "cbc_replication";
  std::optional<std::uint64_t> bootstrap_seed;
  auto* centrality = app.add_subcommand("centrality", "Compute and export centrality scores");
  run_opts.add(centrality);
  centrality->add_option("--kind", centrality_kind,
                         "degree, closeness, betweenness, eigenvector, cbc_exact, "
                         "cbc_replication")
      ->capture_default_str();
  centrality->add_option("--bootstrap-seed", bootstrap_seed,
                         "Seed of the random cache fill used by cbc_exact");
  centrality->add_option("--output,-o", out, "Output CSV (default stdout)");

  std::string scheme = "cbc";
  auto* place = app.add_subcommand("place", "Export the cache assignment of one scheme");
  RunOptions place_opts;
  place_opts.add(place);
  place->add_option("--scheme", scheme, "Placement scheme")->capture_default_str();
  place->add_option("--output,-o", out, "Output CSV (default stdout)");

  std::string workload_in;
  std::string workload_out;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  RunOptions sim_opts;
  sim_opts.add(simulate);
  simulate->add_option("--scheme", scheme, "Placement scheme")->capture_default_str();
  simulate->add_option("--workload", workload_in, "Replay interests from a workload CSV");
  simulate->add_option("--export-workload", workload_out, "Write the interest workload CSV");
  simulate->add_option("--output,-o", out, "Output CSV (default stdout)");

  PlanOptions exp_opts;
  auto* experiment = app.add_subcommand("experiment", "Run a full experiment plan");
  exp_opts.add(experiment);

  PlanOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep-alpha", "CBC hit and success rate over alpha");
  sweep_opts.add(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*generate) {
      return cmd_topology_generate(kind, nodes, density, mean_degree, topo_seed, label, out);
    }
    if (*validate) {
      return cmd_topology_validate(validate_path, validate_origin);
    }
    if (*centrality) {
      return cmd_centrality(run_opts, centrality_kind, bootstrap_seed, out);
    }
    if (*place) {
      return cmd_place(place_opts, scheme, out);
    }
    if (*simulate) {
      return cmd_simulate(sim_opts, scheme, workload_in, workload_out, out);
    }
    if (*experiment) {
      return cmd_experiment(exp_opts, ExperimentPlan{});
    }
    if (*sweep) {
      ExperimentPlan defaults;
      defaults.schemes = {Scheme::cbc};
      defaults.alphas = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
      defaults.output_dir = "results-alpha";
      return cmd_experiment(sweep_opts, defaults);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
