#include "ssplmm/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ssplmm {

double l1_error(std::span<const double> u, std::span<const double> exact, double dx) {
    if (u.size() != exact.size())
        throw LengthMismatch("l1_error: array lengths differ");
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i)
        s += std::abs(u[i] - exact[i]);
    return s * dx;
}

double total_variation(std::span<const double> u, bool periodic) {
    if (u.empty())
        throw EmptyHistory("total_variation: empty state");
    double tv = 0.0;
    for (size_t i = 0; i + 1 < u.size(); ++i)
        tv += std::abs(u[i + 1] - u[i]);
    if (periodic && u.size() > 1)
        tv += std::abs(u.front() - u.back());
    return tv;
}

EfficiencySummary efficiency_summary(const Trajectory& trajectory) {
    EfficiencySummary out;
    double h_min = std::numeric_limits<double>::infinity();
    for (const auto& r : trajectory.steps) {
        if (r.tag != StepTag::Lmm)
            continue;
        ++out.lmm_steps;
        if (!r.clipped)
            h_min = std::min(h_min, r.h);
    }
    if (out.lmm_steps == 0)
        throw EmptyTrajectory("efficiency_summary: no multistep steps taken");
    if (std::isinf(h_min)) // only a single, clipped step: use it as-is
        h_min = trajectory.steps.back().h;
    out.h_min = h_min;
    out.h_avg = (trajectory.duration() - trajectory.starter_h_sum()) / out.lmm_steps;
    out.s = out.h_min / out.h_avg;
    return out;
}

double efficiency_ratio(const Trajectory& trajectory) { return efficiency_summary(trajectory).s; }

ConvergenceTable make_convergence_table(const std::string& method,
                                        std::span<const int> resolutions,
                                        std::span<const double> errors) {
    if (resolutions.size() != errors.size())
        throw LengthMismatch("make_convergence_table: lengths differ");
    if (resolutions.size() < 2)
        throw DomainError("make_convergence_table: need at least two resolutions");
    ConvergenceTable table;
    table.method = method;
    for (size_t r = 0; r < resolutions.size(); ++r) {
        ConvergenceRow row;
        row.resolution = resolutions[r];
        row.l1 = errors[r];
        row.order = (r == 0) ? std::numeric_limits<double>::quiet_NaN()
                             : std::log(errors[r - 1] / errors[r]) /
                                   std::log(static_cast<double>(resolutions[r]) /
                                            static_cast<double>(resolutions[r - 1]));
        table.rows.push_back(row);
    }
    return table;
}

void write_csv(const ConvergenceTable& table, std::ostream& os) {
    os << "resolution,error,order\n";
    for (const auto& row : table.rows) {
        os << row.resolution << ',' << format_csv_double(row.l1) << ',';
        if (std::isnan(row.order))
            os << "";
        else
            os << format_csv_double(row.order);
        os << '\n';
    }
}

std::string format_csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace ssplmm
