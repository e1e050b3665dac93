#include "ssplmm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <thread>

#include "ssplmm/integrator.hpp"
#include "ssplmm/spatial.hpp"

namespace ssplmm {

namespace {

ControllerParams params_for(const RunConfig& config) {
    ControllerParams p;
    if (config.method == Method::Ssprk2Only) {
        p = ControllerParams::second_order(3);
    } else if (method_order(config.method) == 2) {
        p = ControllerParams::second_order(method_k(config.method));
    } else {
        p = ControllerParams::third_order(method_k(config.method));
    }
    p.cfl_fe = config.cfl_fe;
    p.gamma = config.gamma;
    p.enforce_conditions = config.enforce_conditions;
    return p;
}

Trajectory run_with(const RunConfig& config, const Problem& problem, std::vector<double> u0) {
    const ControllerParams params = params_for(config);
    IntegratorConfig ic;
    ic.t_final = config.t_final;
    ic.h1 = config.h1;
    if (config.method == Method::Ssprk2Only)
        return run_ssprk2(problem, std::move(u0), params, ic);
    if (method_order(config.method) == 2)
        return run_second_order(problem, std::move(u0), params, ic);
    return run_third_order(problem, std::move(u0), params, ic);
}

void write_steps_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write '" + path + "'");
    os << "n,t,h,nu,tv,method_tag,rejections\n";
    for (const auto& r : traj.steps) {
        os << r.n << ',' << format_csv_double(r.t) << ',' << format_csv_double(r.h) << ','
           << format_csv_double(r.nu) << ',' << format_csv_double(r.tv) << ','
           << (r.tag == StepTag::Starter ? "starter" : "lmm") << ',' << r.rejections << '\n';
    }
}

void write_summary_csv(const RunOutputs& out, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write '" + path + "'");
    os << "s,N,h_min,h_avg,final_tv,l1_error\n";
    os << format_csv_double(out.efficiency.s) << ',' << out.efficiency.lmm_steps << ','
       << format_csv_double(out.efficiency.h_min) << ','
       << format_csv_double(out.efficiency.h_avg) << ',' << format_csv_double(out.final_tv)
       << ',' << format_csv_double(out.l1) << '\n';
}

void write_solution_csv(const SemiDiscreteProblem& problem, std::span<const double> u,
                        const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write '" + path + "'");
    const int n = problem.n_cells();
    if (problem.n_components() == 1) {
        os << "x,u\n";
        for (int i = 0; i < n; ++i)
            os << format_csv_double(problem.grid().center(i)) << ','
               << format_csv_double(u[static_cast<size_t>(i)]) << '\n';
    } else {
        os << "x,density,momentum,energy\n";
        for (int i = 0; i < n; ++i)
            os << format_csv_double(problem.grid().center(i)) << ','
               << format_csv_double(u[static_cast<size_t>(i)]) << ','
               << format_csv_double(u[static_cast<size_t>(n + i)]) << ','
               << format_csv_double(u[static_cast<size_t>(2 * n + i)]) << '\n';
    }
}

} // namespace

RunOutputs execute_run(const RunConfig& config) {
    config.validate();
    const int order = (config.method == Method::Ssprk2Only) ? 2 : method_order(config.method);
    auto problem = make_problem(config.problem, config.n_cells, order, config.cfl_fe);
    RunOutputs out;
    out.trajectory = run_with(config, *problem, problem->initial_state());
    out.final_tv = problem->total_variation(out.trajectory.final_state);
    if (out.trajectory.lmm_step_count() > 0)
        out.efficiency = efficiency_summary(out.trajectory);
    out.l1 = std::numeric_limits<double>::quiet_NaN();
    if (config.problem == "advection")
        out.l1 = l1_error(out.trajectory.final_state,
                          problem->advection_exact_state(out.trajectory.t_end),
                          problem->grid().dx());
    return out;
}

void cmd_run(const RunConfig& config, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const int order = (config.method == Method::Ssprk2Only) ? 2 : method_order(config.method);
    auto problem = make_problem(config.problem, config.n_cells, order, config.cfl_fe);

    log << "run: problem=" << config.problem << " method=" << method_name(config.method)
        << " cells=" << config.n_cells << " tfinal=" << config.t_final << '\n';
    if (problem->reconstruction() == Reconstruction::Weno5)
        log << "reconstruction: weno5 (jiang-shu indicators, eps=1e-6)\n";
    else
        log << "reconstruction: tvd (mc limiter)\n";

    RunOutputs out;
    out.trajectory = run_with(config, *problem, problem->initial_state());
    out.final_tv = problem->total_variation(out.trajectory.final_state);
    if (out.trajectory.lmm_step_count() > 0)
        out.efficiency = efficiency_summary(out.trajectory);
    out.l1 = std::numeric_limits<double>::quiet_NaN();
    if (config.problem == "advection")
        out.l1 = l1_error(out.trajectory.final_state,
                          problem->advection_exact_state(out.trajectory.t_end),
                          problem->grid().dx());

    const auto dir = std::filesystem::path(config.out_dir);
    write_steps_csv(out.trajectory, (dir / "steps.csv").string());
    write_summary_csv(out, (dir / "summary.csv").string());
    if (config.write_snapshots)
        write_solution_csv(*problem, out.trajectory.final_state, (dir / "solution.csv").string());

    log << "steps: " << out.trajectory.steps.size() << " (lmm "
        << out.trajectory.lmm_step_count() << "), t_end=" << out.trajectory.t_end << '\n';
    if (out.trajectory.lmm_step_count() > 0)
        log << "efficiency: s=" << out.efficiency.s << " h_min=" << out.efficiency.h_min
            << " h_avg=" << out.efficiency.h_avg << '\n';
    if (!std::isnan(out.l1))
        log << "l1_error: " << out.l1 << '\n';
}

int batch_thread_cap() {
    if (const char* env = std::getenv("SSP_LMM_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

ConvergenceTable cmd_convergence(const RunConfig& config, std::vector<int> resolutions,
                                 const std::string& out_file, std::ostream& log) {
    config.validate();
    if (resolutions.size() < 2)
        throw ConfigError("convergence needs at least two resolutions");
    if (config.problem != "advection")
        throw ConfigError("convergence requires the advection problem (known exact solution)");

    std::vector<double> errors(resolutions.size());
    const int cap = std::max(1, batch_thread_cap());
    std::vector<std::future<double>> futures;
    size_t next = 0;
    while (next < resolutions.size()) {
        const size_t batch = std::min<size_t>(static_cast<size_t>(cap), resolutions.size() - next);
        futures.clear();
        for (size_t i = 0; i < batch; ++i) {
            RunConfig rc = config;
            rc.n_cells = resolutions[next + i];
            futures.push_back(std::async(std::launch::async,
                                         [rc]() { return execute_run(rc).l1; }));
        }
        for (size_t i = 0; i < batch; ++i)
            errors[next + i] = futures[i].get();
        next += batch;
    }

    ConvergenceTable table =
        make_convergence_table(method_name(config.method), resolutions, errors);
    if (!out_file.empty()) {
        std::ofstream os(out_file);
        if (!os)
            throw ConfigError("cannot write '" + out_file + "'");
        write_csv(table, os);
    }
    write_csv(table, log);
    return table;
}

void cmd_certificate(const RatioHistory& ratios, int p, std::ostream& out) {
    const int k = ratios.k();
    out << "k = " << k << ", p = " << p << "\n";
    out << "Omega:";
    for (int j = 0; j <= k; ++j)
        out << ' ' << ratios.Omega(j);
    out << "\n";
    const double bound = upper_bound(ratios.Omega_k(), p);
    out << "upper bound: " << format_csv_double(bound) << "\n";

    if (p == 2) {
        const FormulaCoefficients f = make_second_order(ratios);
        out << "optimal C = " << format_csv_double(f.ssp_coeff.value()) << "\n";
        out << "support: delta_0 beta_" << (k - 1) << "\n";
        out << "alpha:";
        for (double a : f.alphas)
            out << ' ' << format_csv_double(a);
        out << "\nbeta:";
        for (double b : f.betas)
            out << ' ' << format_csv_double(b);
        out << "\n";
        return;
    }
    if (p != 3)
        throw ConfigError("certificates are available for p = 2 or p = 3");

    const ThirdOrderCertificate cert = third_order_certificate(ratios);
    for (size_t i = 0; i < cert.r_values.size(); ++i) {
        out << "r_" << i << " = ";
        if (std::isinf(cert.r_values[i]))
            out << "inf";
        else
            out << format_csv_double(cert.r_values[i]);
        out << "\n";
    }
    out << "optimal C = " << format_csv_double(cert.optimal_C) << " at index";
    for (int i : cert.argmin_indices)
        out << ' ' << i;
    out << "\n";
    if (!cert.unique_argmin)
        out << "note: minimum attained at several indices; optimal formula not unique\n";
    for (int j : cert.borderline_max_indices)
        out << "note: r_" << j << " candidate expressions tie within 1e-12\n";
    out << "support:";
    for (const auto& c : cert.support)
        out << ' ' << c.str();
    out << "\n";
    if (cert.support.size() <= 3 && !cert.support.empty()) {
        const FormulaCoefficients f =
            formula_from_support(ratios, cert.optimal_C, cert.support);
        out << "alpha:";
        for (double a : f.alphas)
            out << ' ' << format_csv_double(a);
        out << "\nbeta:";
        for (double b : f.betas)
            out << ' ' << format_csv_double(b);
        out << "\n";
    }
}

} // namespace ssplmm
