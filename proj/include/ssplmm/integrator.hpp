#pragma once

// Full time-stepping drivers: SSP Runge-Kutta starting procedure with CFL
// monitoring, step rejection, and the variable step-size multistep main loop.

#include <deque>
#include <span>
#include <vector>

#include "ssplmm/controller.hpp"
#include "ssplmm/formula.hpp"
#include "ssplmm/spatial.hpp"

namespace ssplmm {

enum class StepTag { Starter, Lmm };

struct StepRecord {
    int n = 0;
    double t = 0.0;
    double h = 0.0;
    double nu = 0.0; // CFL number of the accepted step
    double tv = 0.0;
    double h_fe = 0.0; // forward-Euler step size of the accepted state
    int rejections = 0;
    StepTag tag = StepTag::Starter;
    bool clipped = false; // step shortened to land on the final time
};

struct Trajectory {
    int k = 0;
    int order = 0;
    double t0 = 0.0;
    double t_end = 0.0;
    double initial_tv = 0.0;
    double initial_h_fe = 0.0;
    std::vector<StepRecord> steps;
    std::vector<double> final_state;

    [[nodiscard]] double starter_h_sum() const;
    [[nodiscard]] int lmm_step_count() const;
    [[nodiscard]] double duration() const { return t_end - t0; }
};

struct IntegratorConfig {
    double t0 = 0.0;
    double t_final = 1.0;
    double h1 = 0.1;
    int max_retries = 20;
};

/// One state of the k-step window together with its cached evaluation.
struct HistoryEntry {
    std::vector<double> u;
    std::vector<double> f; // RHS at (t, u), reused by the multistep formula
    double t = 0.0;
    double h = 0.0; // step that produced u (unused for the initial state)
    double h_fe = 0.0;
};

/// Ring of the k most recent states, oldest first.
class StepHistory {
  public:
    explicit StepHistory(int k) : k_(k) {}

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] int size() const { return static_cast<int>(entries_.size()); }
    [[nodiscard]] const HistoryEntry& entry(int j) const { return entries_[static_cast<size_t>(j)]; }
    [[nodiscard]] const HistoryEntry& newest() const { return entries_.back(); }

    void push(HistoryEntry entry);

    /// Sum of the newest k-1 producing steps (the h-history of the greedy rule).
    [[nodiscard]] double recent_step_sum() const;
    /// Minimum stored forward-Euler step size.
    [[nodiscard]] double mu() const;
    /// The k step sizes h_{n-k+1}..h_n with the candidate step appended.
    [[nodiscard]] std::vector<double> steps_with(double h_next) const;

  private:
    int k_;
    std::deque<HistoryEntry> entries_;
};

/// Two-stage, second-order SSP Runge-Kutta step: u* = u + h f(t,u), then
/// the half-half combination with f(t+h, u*).  f_u is the cached f(t,u).
void ssprk2_step(const Problem& problem, double t, double h, std::span<const double> u,
                 std::span<const double> f_u, std::span<double> out);

/// Convenience overload evaluating f(t, u) internally.
std::vector<double> ssprk2_step(const Problem& problem, double t, double h,
                                std::span<const double> u);

/// One multistep combination from cached history evaluations:
/// u_n = sum_j (alpha_j u_j + h beta_j f_j).
std::vector<double> lmm_step(const FormulaCoefficients& formula, const StepHistory& history,
                             double h_n);

/// Second-order driver (k >= 3): SSP RK2 starting steps with a posteriori
/// CFL rejection, then the greedy-step multistep loop.
Trajectory run_second_order(const Problem& problem, std::vector<double> u0,
                            const ControllerParams& params, const IntegratorConfig& config);

/// Third-order driver (k = 4 or 5): additionally enforces the wave-speed
/// drift band and the starting-step bound, halving rejected steps.
Trajectory run_third_order(const Problem& problem, std::vector<double> u0,
                           const ControllerParams& params, const IntegratorConfig& config);

/// Pure SSP RK2 marching with h = gamma * h_FE and CFL rejection; the
/// starting procedure extended over the whole interval.
Trajectory run_ssprk2(const Problem& problem, std::vector<double> u0,
                      const ControllerParams& params, const IntegratorConfig& config);

} // namespace ssplmm
