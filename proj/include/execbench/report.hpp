#pragma once

#include <ostream>
#include <string>

#include "execbench/assessor.hpp"
#include "execbench/evaluator.hpp"

namespace execbench {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// JSON document: configuration echo, alphabets, matches, warnings and the
// ranked changes with their per-variant alignments.
std::string benchmark_report_json(const BenchmarkReport& report);

// One row per change: rank, own activities, replacements, feasibility,
// performance impact, affected traces, transitive flag.
void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report);

// Aligned text table with one line per replacement.
void write_benchmark_table(std::ostream& out, const BenchmarkReport& report);

std::string experiment_report_json(const eval::ExperimentReport& report);

// Precision / Recall / Feasibility, technique vs baseline.
void write_experiment_table(std::ostream& out, const eval::ExperimentReport& report);

}  // namespace execbench
