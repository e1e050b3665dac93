#pragma once

// Error norms, convergence tables, total variation, and the efficiency ratio
// of a variable step-size run.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ssplmm/integrator.hpp"

namespace ssplmm {

/// Discrete L1 norm of u - exact: sum |u_i - exact_i| * dx.
double l1_error(std::span<const double> u, std::span<const double> exact, double dx);

/// Sum of absolute neighbor differences, with wraparound term iff periodic.
double total_variation(std::span<const double> u, bool periodic);

struct EfficiencySummary {
    double s = 0.0;     // h_min / h_avg over the multistep steps
    double h_min = 0.0; // smallest accepted multistep step (final clip excluded)
    double h_avg = 0.0; // (T - starting steps) / N
    int lmm_steps = 0;
};

EfficiencySummary efficiency_summary(const Trajectory& trajectory);

/// The ratio s alone.
double efficiency_ratio(const Trajectory& trajectory);

struct ConvergenceRow {
    int resolution = 0;
    double l1 = 0.0;
    double order = 0.0; // NaN on the first row
};

struct ConvergenceTable {
    std::string method;
    std::vector<ConvergenceRow> rows;
};

/// Builds rows with observed orders from consecutive refinement pairs
/// (log ratio of errors over log ratio of resolutions).
ConvergenceTable make_convergence_table(const std::string& method,
                                        std::span<const int> resolutions,
                                        std::span<const double> errors);

/// CSV with header row: resolution,error,order.
void write_csv(const ConvergenceTable& table, std::ostream& os);

/// Full 17-significant-digit decimal rendering, stable across runs.
std::string format_csv_double(double x);

} // namespace ssplmm
