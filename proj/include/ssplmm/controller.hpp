#pragma once

// Greedy SSP step-size selection: the closed-form recursions for second- and
// third-order methods, the admissibility conditions on forward-Euler step
// sizes, and the rational-recursion analysis tool.

#include <span>
#include <vector>

#include "ssplmm/errors.hpp"

namespace ssplmm {

/// Parameters governing one method's step-size control.
struct ControllerParams {
    int k = 3;
    int order = 2;
    double rho = 1.0;     // starting-step bound factor (third order)
    double rho_fe = 1.0;  // per-step wave-speed drift band (third order)
    double cfl_fe = 0.5;
    double gamma = 0.9;
    bool enforce_conditions = true;

    static ControllerParams second_order(int k);
    /// k = 4 or 5; fills the published (rho, rho_fe) pairs for each k.
    static ControllerParams third_order(int k);
};

/// Forward-Euler step sizes of the k states entering the next combination,
/// oldest first.
struct FeHistory {
    std::vector<double> values;
};

/// Minimum forward-Euler step size over the stored states.
double mu_n(const FeHistory& fe);

/// Largest step satisfying the implicit second-order SSP restriction:
/// h = mu * S / (S + mu), S the sum of the previous k-1 steps.
double greedy_step_second(double history_sum, double mu);

/// Third-order counterpart: h = mu * S / (S + 2 mu).
double greedy_step_third(double history_sum, double mu);

/// True iff rho_fe <= fe_prev/fe_curr <= 1/rho_fe.
bool check_fe_ratio(double fe_prev, double fe_curr, double rho_fe);

/// True iff h_j <= rho * fe_j (boundary inclusive).
bool check_h_bound(double h_j, double fe_j, double rho);

/// Result of iterating tau_n = S/(A + S) with S the sum of the previous k-1
/// values.  The iteration runs in extended (binary128) precision: the run
/// structure of the sequence is sensitive to rounding and double precision
/// misorders near-ties after a few dozen steps.
struct TauRecursionResult {
    std::vector<double> sequence;    // tau_1..tau_{n_max}, rounded to double
    std::vector<int> run_lengths;    // maximal monotone non-increasing runs
    double limit = 0.0;              // 0 if k-1 <= A, else (k-1-A)/(k-1)
    bool converged = false;          // |tau_n - limit| < 1e-10 for 50 iterates
    int converged_at = -1;           // first index of that window (1-based)
};

/// Iterates the recursion from k-1 initial values (k inferred) for n_max
/// terms and classifies the limit.
TauRecursionResult tau_recursion(std::span<const double> initial, double A, int n_max);

} // namespace ssplmm
