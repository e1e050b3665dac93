#pragma once

// Command layer behind the CLI: executes runs, convergence studies and
// formula certificates, and writes the CSV outputs.

#include <iosfwd>
#include <string>
#include <vector>

#include "ssplmm/diagnostics.hpp"
#include "ssplmm/formula.hpp"
#include "ssplmm/run_config.hpp"

namespace ssplmm {

struct RunOutputs {
    Trajectory trajectory;
    EfficiencySummary efficiency; // zeroed for starter-only methods
    double final_tv = 0.0;
    double l1 = 0.0; // NaN when no exact solution is known
};

/// Executes one configured run without touching the filesystem.
RunOutputs execute_run(const RunConfig& config);

/// Runs and writes steps.csv and summary.csv (plus solution.csv when
/// requested) under config.out_dir.  log receives progress lines.
void cmd_run(const RunConfig& config, std::ostream& log);

/// Convergence study over the given resolutions; writes the table CSV to
/// out_file and echoes it to log.  Rows run concurrently, capped by the
/// SSP_LMM_THREADS environment variable.
ConvergenceTable cmd_convergence(const RunConfig& config, std::vector<int> resolutions,
                                 const std::string& out_file, std::ostream& log);

/// Prints the r_j catalogue (order 3) or the closed-form coefficient
/// (order 2) for the given ratio history, with the sharp upper bound.
void cmd_certificate(const RatioHistory& ratios, int p, std::ostream& out);

/// Thread cap for concurrent runs (SSP_LMM_THREADS, default: hardware).
int batch_thread_cap();

} // namespace ssplmm
