#pragma once

// Shared helpers for the unit and acceptance suites: synthetic problems with
// prescribed dynamics/wave speeds, random-data generators, and the frozen
// run-length list of the rational-recursion example.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "ssplmm/integrator.hpp"
#include "ssplmm/spatial.hpp"

namespace ssplmm::testing {

/// Problem with an arbitrary dense RHS and a prescribed wave speed; dx = 1.
class SyntheticProblem final : public Problem {
  public:
    using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;
    using SpeedFn = std::function<double(double)>;

    SyntheticProblem(int n, double wave_speed, RhsFn rhs = {})
        : n_(n), wave_speed_(wave_speed), rhs_(std::move(rhs)) {}

    /// Time-dependent wave speed variant.
    SyntheticProblem(int n, SpeedFn speed, RhsFn rhs = {})
        : n_(n), wave_speed_(0.0), speed_fn_(std::move(speed)), rhs_(std::move(rhs)) {}

    [[nodiscard]] int size() const override { return n_; }
    double rhs(double t, std::span<const double> u, std::span<double> dudt) const override {
        if (rhs_)
            rhs_(t, u, dudt);
        else
            std::fill(dudt.begin(), dudt.end(), 0.0);
        return max_wave_speed(t, u);
    }
    [[nodiscard]] double max_wave_speed(double t, std::span<const double>) const override {
        return speed_fn_ ? speed_fn_(t) : wave_speed_;
    }
    [[nodiscard]] double dx() const override { return 1.0; }
    [[nodiscard]] double cfl_fe() const override { return 0.5; }
    [[nodiscard]] double total_variation(std::span<const double> u) const override {
        double tv = 0.0;
        for (size_t i = 0; i + 1 < u.size(); ++i)
            tv += std::abs(u[i + 1] - u[i]);
        return tv;
    }

  private:
    int n_;
    double wave_speed_;
    SpeedFn speed_fn_;
    RhsFn rhs_;
};

/// u' = lambda * u with unit reported wave speed.
inline SyntheticProblem lambda_problem(double lambda) {
    return SyntheticProblem(1, 1.0,
                            [lambda](double, std::span<const double> u, std::span<double> d) {
                                d[0] = lambda * u[0];
                            });
}

/// Random smooth periodic profile: c0 + sum of a few Fourier modes.
inline std::vector<double> random_fourier_state(int n_cells, std::mt19937& rng,
                                                double base = 0.0, double amp = 0.4) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double c0 = base + 0.5 * unif(rng);
    double a[3], phi[3];
    for (int m = 0; m < 3; ++m) {
        a[m] = amp * unif(rng);
        phi[m] = std::numbers::pi * unif(rng);
    }
    std::vector<double> u(static_cast<size_t>(n_cells));
    for (int i = 0; i < n_cells; ++i) {
        const double x = (i + 0.5) / n_cells;
        double v = c0;
        for (int m = 0; m < 3; ++m)
            v += a[m] * std::sin(2.0 * std::numbers::pi * (m + 1) * x + phi[m]);
        u[static_cast<size_t>(i)] = v;
    }
    return u;
}

/// Ratio history with random omegas in [lo, hi] (last ratio 1).
inline RatioHistory random_ratios(int k, std::mt19937& rng, double lo = 0.5, double hi = 2.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    std::vector<double> omegas(static_cast<size_t>(k));
    for (int j = 0; j + 1 < k; ++j)
        omegas[static_cast<size_t>(j)] = unif(rng);
    omegas.back() = 1.0;
    return RatioHistory::from_omegas(std::move(omegas));
}

/// Published run-length list of the k=4, A=1 recursion example
/// (starts 1, 1/200, 0.95638788642; n <= 1000).
inline const std::vector<int>& recursion_example_run_lengths() {
    static const std::vector<int> runs = {
        2, 3, 2, 1, 2, 1, 2, 1, 2, 1, 2, 3, 3, 3, 3, 2, 1, 2, 1, 2, 1,
        2, 1, 2, 3, 3, 3, 3, 2, 1, 2, 1, 2, 1, 2, 3, 3, 3, 3, 3, 917};
    return runs;
}

/// Per-step SSP-consistency data recovered from a trajectory: for each
/// multistep record, the window minimum of h_FE and the SSP coefficient of
/// the formula actually used.
struct LmmStepCheck {
    double h = 0.0;
    double mu = 0.0;
    double ssp_coeff = 0.0;
    bool clipped = false;
};

inline std::vector<LmmStepCheck> lmm_step_checks(const Trajectory& traj) {
    struct Node {
        double h, h_fe;
    };
    std::vector<Node> nodes;
    nodes.push_back({0.0, traj.initial_h_fe});
    for (const auto& r : traj.steps)
        nodes.push_back({r.h, r.h_fe});

    std::vector<LmmStepCheck> out;
    size_t idx = 1;
    for (const auto& r : traj.steps) {
        if (r.tag == StepTag::Lmm) {
            // window of the k states before this step: nodes idx-k .. idx-1
            const int k = traj.k;
            double mu = nodes[idx - 1].h_fe;
            std::vector<double> steps;
            for (int j = k; j >= 1; --j) {
                mu = std::min(mu, nodes[idx - static_cast<size_t>(j)].h_fe);
                if (j < k)
                    steps.push_back(nodes[idx - static_cast<size_t>(j)].h);
            }
            steps.push_back(r.h);
            const RatioHistory ratios = build_ratio_history(steps);
            const FormulaCoefficients f =
                traj.order == 2 ? make_second_order(ratios) : make_third_order(ratios);
            out.push_back({r.h, mu, f.ssp_coeff.value(), r.clipped});
        }
        ++idx;
    }
    return out;
}

} // namespace ssplmm::testing
