#include "ssplmm/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssplmm {

#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

ControllerParams ControllerParams::second_order(int k) {
    if (k < 3)
        throw DomainError("ControllerParams: second order requires k >= 3");
    ControllerParams p;
    p.k = k;
    p.order = 2;
    return p;
}

ControllerParams ControllerParams::third_order(int k) {
    if (k != 4 && k != 5)
        throw DomainError("ControllerParams: third order requires k = 4 or 5");
    ControllerParams p;
    p.k = k;
    p.order = 3;
    if (k == 4) {
        p.rho = 6.0 / 10.0;
        p.rho_fe = 9.0 / 10.0;
    } else {
        p.rho = 57.0 / 100.0;
        p.rho_fe = 962.0 / 1000.0;
    }
    return p;
}

double mu_n(const FeHistory& fe) {
    if (fe.values.empty())
        throw EmptyHistory("mu_n: no forward-Euler step sizes stored");
    double m = std::numeric_limits<double>::infinity();
    for (double v : fe.values) {
        if (!(v > 0.0))
            throw DomainError("mu_n: forward-Euler step sizes must be positive");
        m = std::min(m, v);
    }
    return m;
}

double greedy_step_second(double history_sum, double mu) {
    if (!(history_sum > 0.0) || !(mu > 0.0))
        throw DomainError("greedy_step_second: requires positive inputs");
    if (std::isinf(mu))
        return history_sum; // unconstrained limit of mu*S/(S+mu)
    return mu * (history_sum / (history_sum + mu));
}

double greedy_step_third(double history_sum, double mu) {
    if (!(history_sum > 0.0) || !(mu > 0.0))
        throw DomainError("greedy_step_third: requires positive inputs");
    if (std::isinf(mu))
        return 0.5 * history_sum;
    return mu * (history_sum / (history_sum + 2.0 * mu));
}

bool check_fe_ratio(double fe_prev, double fe_curr, double rho_fe) {
    if (std::isinf(fe_prev) && std::isinf(fe_curr))
        return true; // both states carry no waves
    const double ratio = fe_prev / fe_curr;
    return rho_fe <= ratio && ratio <= 1.0 / rho_fe;
}

bool check_h_bound(double h_j, double fe_j, double rho) {
    return h_j <= rho * fe_j;
}

TauRecursionResult tau_recursion(std::span<const double> initial, double A, int n_max) {
    if (initial.size() < 2)
        throw DomainError("tau_recursion: needs at least k-1 = 2 initial values");
    if (!(A > 0.0))
        throw DomainError("tau_recursion: A must be positive");
    double sum0 = 0.0;
    for (double t : initial) {
        if (t < 0.0)
            throw DomainError("tau_recursion: initial values must be non-negative");
        sum0 += t;
    }
    if (!(sum0 > 0.0))
        throw DomainError("tau_recursion: initial values must have positive sum");
    const int km1 = static_cast<int>(initial.size());
    if (n_max < km1)
        throw DomainError("tau_recursion: n_max smaller than the initial segment");

    TauRecursionResult out;
    out.limit = (static_cast<double>(km1) <= A)
                    ? 0.0
                    : (static_cast<double>(km1) - A) / static_cast<double>(km1);

    std::vector<wide_real> tau(static_cast<size_t>(n_max));
    for (int i = 0; i < km1; ++i)
        tau[static_cast<size_t>(i)] = static_cast<wide_real>(initial[static_cast<size_t>(i)]);
    const wide_real wa = static_cast<wide_real>(A);
    for (int n = km1; n < n_max; ++n) {
        wide_real s = 0;
        for (int j = 1; j <= km1; ++j)
            s += tau[static_cast<size_t>(n - j)];
        tau[static_cast<size_t>(n)] = s / (wa + s);
    }

    out.sequence.resize(static_cast<size_t>(n_max));
    for (int i = 0; i < n_max; ++i)
        out.sequence[static_cast<size_t>(i)] = static_cast<double>(tau[static_cast<size_t>(i)]);

    // maximal monotone non-increasing runs, compared at full precision
    int cur = 1;
    for (int i = 1; i < n_max; ++i) {
        if (tau[static_cast<size_t>(i)] <= tau[static_cast<size_t>(i - 1)]) {
            ++cur;
        } else {
            out.run_lengths.push_back(cur);
            cur = 1;
        }
    }
    out.run_lengths.push_back(cur);

    // declare the limit reached after 50 consecutive iterates within 1e-10
    const wide_real wl = static_cast<wide_real>(out.limit);
    int streak = 0;
    for (int i = 0; i < n_max; ++i) {
        const wide_real diff = tau[static_cast<size_t>(i)] - wl;
        if ((diff < 0 ? -diff : diff) < static_cast<wide_real>(1e-10)) {
            if (++streak == 50) {
                out.converged = true;
                out.converged_at = i - 48; // 1-based first index of the window
                break;
            }
        } else {
            streak = 0;
        }
    }
    return out;
}

} // namespace ssplmm
