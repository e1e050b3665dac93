#include "ssplmm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssplmm {

namespace {

double finite_or_throw(double x, const char* what) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "state left the finite range (" << what << ")";
        throw NonFiniteState(os.str());
    }
    return x;
}

struct Evaluation {
    std::vector<double> f;
    double a_max = 0.0;
    double h_fe = 0.0;
    double tv = 0.0;
};

Evaluation evaluate(const Problem& problem, double t, std::span<const double> u) {
    Evaluation ev;
    ev.f.resize(u.size());
    ev.a_max = problem.rhs(t, u, ev.f);
    ev.h_fe = problem.h_fe_from_speed(ev.a_max);
    ev.tv = problem.total_variation(u);
    finite_or_throw(ev.a_max, "wave speed");
    finite_or_throw(ev.tv, "total variation");
    for (double v : u)
        finite_or_throw(v, "solution component");
    return ev;
}

struct Driver {
    const Problem& problem;
    const ControllerParams& params;
    const IntegratorConfig& config;
    Trajectory traj;
    StepHistory history;
    double t;
    double cfl0 = 1.0; // SSP coefficient of the starting Runge-Kutta method

    Driver(const Problem& p, const ControllerParams& cp, const IntegratorConfig& ic)
        : problem(p), params(cp), config(ic), history(cp.k), t(ic.t0) {
        traj.k = cp.k;
        traj.order = cp.order;
        traj.t0 = ic.t0;
    }

    [[nodiscard]] double nu_of(double h, double h_fe) const {
        return params.cfl_fe * h / h_fe;
    }

    [[nodiscard]] bool at_final(double time) const {
        return time >= config.t_final - 1e-12 * std::max(1.0, std::abs(config.t_final));
    }

    void seed(std::vector<double> u0) {
        Evaluation ev = evaluate(problem, t, u0);
        traj.initial_tv = ev.tv;
        traj.initial_h_fe = ev.h_fe;
        HistoryEntry e;
        e.u = std::move(u0);
        e.f = std::move(ev.f);
        e.t = t;
        e.h = 0.0;
        e.h_fe = ev.h_fe;
        history.push(std::move(e));
    }

    double clip_to_final(double h, bool& clipped) const {
        if (t + h > config.t_final) {
            clipped = true;
            return config.t_final - t;
        }
        return h;
    }

    // One starting step with the Algorithm retry rules.  Returns the
    // suggested next starter step size gamma * C0 * h_FE(u_n).
    double starter_step(int n, double& h) {
        int rejections = 0;
        for (;;) {
            bool clipped = false;
            const double h_try = clip_to_final(h, clipped);
            const HistoryEntry& prev = history.newest();
            std::vector<double> u_new(prev.u.size());
            ssprk2_step(problem, prev.t, h_try, prev.u, prev.f, u_new);
            Evaluation ev = evaluate(problem, prev.t + h_try, u_new);
            const double nu = nu_of(h_try, ev.h_fe);

            if (params.order == 3 && params.enforce_conditions) {
                const bool fe_ok = check_fe_ratio(prev.h_fe, ev.h_fe, params.rho_fe);
                const bool hb_ok = check_h_bound(h_try, ev.h_fe, params.rho);
                if (!fe_ok || !hb_ok) {
                    h = !fe_ok ? 0.5 * h_try : params.gamma * cfl0 * params.rho * ev.h_fe;
                    if (++rejections > config.max_retries)
                        throw StartupFailure("starting step rejected too many times "
                                             "(admissibility conditions)");
                    continue;
                }
            }
            if (nu > cfl0 * params.cfl_fe) {
                h = params.gamma * cfl0 * ev.h_fe;
                if (++rejections > config.max_retries)
                    throw StartupFailure("starting step rejected too many times (CFL)");
                continue;
            }

            t = prev.t + h_try;
            HistoryEntry e;
            e.u = std::move(u_new);
            e.f = std::move(ev.f);
            e.t = t;
            e.h = h_try;
            e.h_fe = ev.h_fe;
            const double h_fe_n = ev.h_fe;
            history.push(std::move(e));
            traj.steps.push_back(
                {n, t, h_try, nu, ev.tv, h_fe_n, rejections, StepTag::Starter, clipped});
            return params.gamma * cfl0 * h_fe_n;
        }
    }

    double greedy(double sum, double mu) const {
        return params.order == 2 ? greedy_step_second(sum, mu) : greedy_step_third(sum, mu);
    }

    void lmm_loop() {
        double h = greedy(history.recent_step_sum(), history.mu());
        int n = params.k;
        while (!at_final(t)) {
            bool clipped = false;
            double h_try = clip_to_final(h, clipped);
            int rejections = 0;
            for (;;) {
                const RatioHistory ratios = build_ratio_history(history.steps_with(h_try));
                const FormulaCoefficients formula = (params.order == 2)
                                                        ? make_second_order(ratios)
                                                        : make_third_order(ratios);
                std::vector<double> u_new = lmm_step(formula, history, h_try);
                Evaluation ev = evaluate(problem, t + h_try, u_new);

                if (params.order == 3 && params.enforce_conditions &&
                    !check_fe_ratio(history.newest().h_fe, ev.h_fe, params.rho_fe)) {
                    h_try *= 0.5;
                    clipped = false;
                    if (++rejections > config.max_retries)
                        throw Error("multistep step rejected too many times "
                                    "(wave-speed drift band)");
                    continue;
                }

                t += h_try;
                const double nu = nu_of(h_try, ev.h_fe);
                HistoryEntry e;
                e.u = std::move(u_new);
                e.f = std::move(ev.f);
                e.t = t;
                e.h = h_try;
                e.h_fe = ev.h_fe;
                const double h_fe_n = ev.h_fe;
                history.push(std::move(e));
                traj.steps.push_back(
                    {n, t, h_try, nu, ev.tv, h_fe_n, rejections, StepTag::Lmm, clipped});
                break;
            }
            h = greedy(history.recent_step_sum(), history.mu());
            ++n;
        }
    }

    Trajectory finish() {
        traj.t_end = t;
        traj.final_state = history.newest().u;
        return std::move(traj);
    }
};

Trajectory run_lmm(const Problem& problem, std::vector<double> u0,
                   const ControllerParams& params, const IntegratorConfig& config) {
    if (!(config.t_final > config.t0))
        throw DomainError("run: final time must exceed the initial time");
    Driver d(problem, params, config);
    d.seed(std::move(u0));

    double h = std::min(config.h1, params.gamma * d.cfl0 * d.history.newest().h_fe);
    for (int n = 1; n <= params.k - 1; ++n) {
        const double h_next = d.starter_step(n, h);
        if (d.at_final(d.t))
            return d.finish(); // degenerate horizon: never reached the multistep phase
        if (n < params.k - 1)
            h = h_next;
    }
    d.lmm_loop();
    return d.finish();
}

} // namespace

double Trajectory::starter_h_sum() const {
    double s = 0.0;
    for (const auto& r : steps)
        if (r.tag == StepTag::Starter)
            s += r.h;
    return s;
}

int Trajectory::lmm_step_count() const {
    int n = 0;
    for (const auto& r : steps)
        if (r.tag == StepTag::Lmm)
            ++n;
    return n;
}

void StepHistory::push(HistoryEntry entry) {
    entries_.push_back(std::move(entry));
    if (static_cast<int>(entries_.size()) > k_)
        entries_.pop_front();
}

double StepHistory::recent_step_sum() const {
    if (static_cast<int>(entries_.size()) < k_)
        throw EmptyHistory("StepHistory: window not yet full");
    double s = 0.0;
    for (size_t j = 1; j < entries_.size(); ++j)
        s += entries_[j].h;
    return s;
}

double StepHistory::mu() const {
    if (entries_.empty())
        throw EmptyHistory("StepHistory: no states stored");
    double m = entries_[0].h_fe;
    for (const auto& e : entries_)
        m = std::min(m, e.h_fe);
    return m;
}

std::vector<double> StepHistory::steps_with(double h_next) const {
    if (static_cast<int>(entries_.size()) < k_)
        throw EmptyHistory("StepHistory: window not yet full");
    std::vector<double> steps;
    steps.reserve(entries_.size());
    for (size_t j = 1; j < entries_.size(); ++j)
        steps.push_back(entries_[j].h);
    steps.push_back(h_next);
    return steps;
}

void ssprk2_step(const Problem& problem, double t, double h, std::span<const double> u,
                 std::span<const double> f_u, std::span<double> out) {
    if (!(h > 0.0))
        throw NonPositiveStep("ssprk2_step: step size must be positive");
    const size_t n = u.size();
    std::vector<double> stage(n);
    for (size_t i = 0; i < n; ++i)
        stage[i] = u[i] + h * f_u[i];
    std::vector<double> f_stage(n);
    problem.rhs(t + h, stage, f_stage);
    for (size_t i = 0; i < n; ++i)
        out[i] = 0.5 * u[i] + 0.5 * (stage[i] + h * f_stage[i]);
}

std::vector<double> ssprk2_step(const Problem& problem, double t, double h,
                                std::span<const double> u) {
    std::vector<double> f(u.size());
    problem.rhs(t, u, f);
    std::vector<double> out(u.size());
    ssprk2_step(problem, t, h, u, f, out);
    return out;
}

std::vector<double> lmm_step(const FormulaCoefficients& formula, const StepHistory& history,
                             double h_n) {
    if (history.size() != formula.k)
        throw LengthMismatch("lmm_step: history length does not match the formula");
    if (!(h_n > 0.0))
        throw NonPositiveStep("lmm_step: step size must be positive");
    const size_t n = history.entry(0).u.size();
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < formula.k; ++j) {
        const double a = formula.alphas[static_cast<size_t>(j)];
        const double b = formula.betas[static_cast<size_t>(j)];
        if (a == 0.0 && b == 0.0)
            continue;
        const HistoryEntry& e = history.entry(j);
        const double hb = h_n * b;
        for (size_t i = 0; i < n; ++i)
            out[i] += a * e.u[i] + hb * e.f[i];
    }
    return out;
}

Trajectory run_second_order(const Problem& problem, std::vector<double> u0,
                            const ControllerParams& params, const IntegratorConfig& config) {
    if (params.order != 2 || params.k < 3)
        throw DomainError("run_second_order: needs second-order params with k >= 3");
    return run_lmm(problem, std::move(u0), params, config);
}

Trajectory run_third_order(const Problem& problem, std::vector<double> u0,
                           const ControllerParams& params, const IntegratorConfig& config) {
    if (params.order != 3 || (params.k != 4 && params.k != 5))
        throw DomainError("run_third_order: needs third-order params with k = 4 or 5");
    return run_lmm(problem, std::move(u0), params, config);
}

Trajectory run_ssprk2(const Problem& problem, std::vector<double> u0,
                      const ControllerParams& params, const IntegratorConfig& config) {
    if (!(config.t_final > config.t0))
        throw DomainError("run: final time must exceed the initial time");
    ControllerParams rk = params;
    rk.order = 2;
    rk.k = 2; // history depth is irrelevant; only the newest state is used
    Driver d(problem, rk, config);
    d.seed(std::move(u0));
    double h = std::min(config.h1, rk.gamma * d.cfl0 * d.history.newest().h_fe);
    int n = 1;
    while (!d.at_final(d.t))
        h = d.starter_step(n++, h);
    return d.finish();
}

} // namespace ssplmm
