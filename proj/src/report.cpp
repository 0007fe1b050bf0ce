#include "cbcfog/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cbcfog/format.hpp"

namespace cbcfog {

namespace {

constexpr const char* kHeader =
    "topology_label,scheme,alpha,repetition,seed,hit_rate,success_rate,generated,"
    "cache_satisfied,origin_satisfied,unsatisfied,self_satisfied,pooled_hit_rate\n";

void write_aggregate(std::ostream& out, const AggregateRow& a, const char* tag,
                     const MetricSummary& m) {
  out << a.topology_label << ',' << to_string(a.scheme) << ',' << format_double(a.alpha) << ','
      << tag << ",," << format_double(m.hit_rate) << ',' << format_double(m.success_rate) << ','
      << format_double(m.generated) << ',' << format_double(m.cache_satisfied) << ','
      << format_double(m.origin_satisfied) << ',' << format_double(m.unsatisfied) << ','
      << format_double(m.self_satisfied) << ',' << format_double(m.pooled_hit_rate) << '\n';
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) {
    s.append(width - s.size(), ' ');
  }
  return s + ' ';
}

enum class Metric { hit, success };

double pick(const MetricSummary& m, Metric metric) {
  return metric == Metric::hit ? m.hit_rate : m.success_rate;
}

void summary_block(std::ostringstream& out, const ResultTable& table, Metric metric) {
  out << (metric == Metric::hit ? "cache hit rate" : "success rate")
      << " (mean over repetitions)\n";
  std::size_t label_width = 22;
  std::size_t col = 12;
  for (const auto& label : table.topology_labels) {
    col = std::max(col, label.size());
  }
  out << pad("scheme", label_width);
  for (const auto& label : table.topology_labels) {
    out << pad(label, col);
  }
  out << '\n';
  for (Scheme s : table.schemes) {
    out << pad(std::string(to_string(s)), label_width);
    for (std::size_t t = 0; t < table.topology_labels.size(); ++t) {
      double sum = 0.0;
      std::size_t n = 0;
      for (double a : table.alphas) {
        if (const auto* agg = table.find(t, s, a)) {
          sum += pick(agg->mean, metric);
          ++n;
        }
      }
      out << pad(n == 0 ? "-" : fixed(sum / static_cast<double>(n)), col);
    }
    out << '\n';
    if (table.alphas.size() < 2) {
      continue;
    }
    for (double a : table.alphas) {
      out << pad("  alpha=" + format_double(a), label_width);
      for (std::size_t t = 0; t < table.topology_labels.size(); ++t) {
        const auto* agg = table.find(t, s, a);
        out << pad(agg ? fixed(pick(agg->mean, metric)) : "-", col);
      }
      out << '\n';
    }
  }
}

// Rows: alpha; columns: per topology mean and stddev of the cbc scheme.
void alpha_table(std::ostream& out, const ResultTable& table, Metric metric) {
  out << "# cbc " << (metric == Metric::hit ? "hit rate" : "success rate") << " vs alpha\n# alpha";
  for (const auto& label : table.topology_labels) {
    out << ' ' << label << "_mean " << label << "_stddev";
  }
  out << '\n';
  for (double a : table.alphas) {
    out << format_double(a);
    for (std::size_t t = 0; t < table.topology_labels.size(); ++t) {
      const auto* agg = table.find(t, Scheme::cbc, a);
      out << ' ' << (agg ? format_double(pick(agg->mean, metric)) : "nan") << ' '
          << (agg ? format_double(pick(agg->stddev, metric)) : "nan");
    }
    out << '\n';
  }
}

// One gnuplot index block per topology; rows: scheme, columns: alpha.
void scheme_table(std::ostream& out, const ResultTable& table, Metric metric) {
  for (std::size_t t = 0; t < table.topology_labels.size(); ++t) {
    if (t > 0) {
      out << "\n\n";
    }
    out << "# topology " << table.topology_labels[t] << " ("
        << (metric == Metric::hit ? "hit rate" : "success rate") << ")\n# scheme";
    for (double a : table.alphas) {
      out << " alpha=" << format_double(a);
    }
    out << '\n';
    for (Scheme s : table.schemes) {
      out << to_string(s);
      for (double a : table.alphas) {
        const auto* agg = table.find(t, s, a);
        out << ' ' << (agg ? format_double(pick(agg->mean, metric)) : "nan");
      }
      out << '\n';
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

} // namespace

void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << kHeader;
  std::size_t r = 0;
  for (const auto& agg : table.aggregates) {
    for (std::size_t i = 0; i < agg.count; ++i, ++r) {
      const auto& row = table.rows.at(r);
      out << row.topology_label << ',' << to_string(row.scheme) << ',' << format_double(row.alpha)
          << ',' << row.repetition << ',' << row.seed << ',' << format_double(row.hit_rate) << ','
          << format_double(row.success_rate) << ',' << row.generated << ','
          << row.cache_satisfied << ',' << row.origin_satisfied << ',' << row.unsatisfied << ','
          << row.self_satisfied << ',' << format_double(row.pooled_hit_rate) << '\n';
    }
    write_aggregate(out, agg, "mean", agg.mean);
    write_aggregate(out, agg, "stddev", agg.stddev);
  }
}

std::string format_summary(const ResultTable& table) {
  if (table.aggregates.empty()) {
    return {};
  }
  std::ostringstream out;
  summary_block(out, table, Metric::hit);
  out << '\n';
  summary_block(out, table, Metric::success);
  return out.str();
}

void emit_report(const ResultTable& table, const std::string& directory, bool gnuplot) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + directory + "': " + ec.message());
  }
  const fs::path dir(directory);

  std::ostringstream csv;
  write_results_csv(csv, table);
  write_file(dir / "results.csv", csv.str());
  write_file(dir / "summary.txt", format_summary(table));
  if (!gnuplot || table.aggregates.empty()) {
    return;
  }
  std::ostringstream hit_alpha, hit_schemes, success_alpha, success_schemes;
  alpha_table(hit_alpha, table, Metric::hit);
  scheme_table(hit_schemes, table, Metric::hit);
  alpha_table(success_alpha, table, Metric::success);
  scheme_table(success_schemes, table, Metric::success);
  write_file(dir / "cbc_hit_rate_vs_alpha.dat", hit_alpha.str());
  write_file(dir / "hit_rate_by_scheme.dat", hit_schemes.str());
  write_file(dir / "cbc_success_rate_vs_alpha.dat", success_alpha.str());
  write_file(dir / "success_rate_by_scheme.dat", success_schemes.str());
}

} // namespace cbcfog
