#pragma once

#include <iosfwd>
#include <string>

#include "cbcfog/experiment.hpp"

namespace cbcfog {

/// Data rows and, after each cell, its "mean" and "stddev" rows.
void write_results_csv(std::ostream& out, const ResultTable& table);

/// Plain-text scheme x topology matrices of mean hit rate and success rate,
/// with one sub-row per alpha. Empty for an empty table.
std::string format_summary(const ResultTable& table);

/// Writes results.csv and summary.txt to directory (created if missing),
/// plus gnuplot data files when gnuplot is set. Throws std::runtime_error
/// when the directory cannot be written.
void emit_report(const ResultTable& table, const std::string& directory, bool gnuplot = true);

} // namespace cbcfog
