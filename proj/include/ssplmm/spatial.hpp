#pragma once

// 1D finite-volume semi-discretizations with maximum-wave-speed reporting:
// variable-coefficient advection, Burgers, and the 1D Euler equations, using
// MC-limited TVD or fifth-order WENO reconstruction.

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ssplmm/errors.hpp"

namespace ssplmm {

enum class Reconstruction { MC, Weno5 };
enum class PhysicsKind { Advection, Burgers, Euler };
enum class Boundary { Periodic, Reflecting, Outflow };

struct Grid1D {
    int n_cells = 0;
    double x_lo = 0.0;
    double x_hi = 1.0;
    int ghost = 2; // 2 for TVD, 3 for WENO5

    [[nodiscard]] double dx() const { return (x_hi - x_lo) / n_cells; }
    [[nodiscard]] double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

/// Time-dependent advection velocity a(t) = a0 + a1 sin(2 pi t).
struct AdvectionSpeed {
    double a0 = 2.0;
    double a1 = 1.5;
    [[nodiscard]] double operator()(double t) const;
    /// Integral of a over [0, t] (characteristic displacement).
    [[nodiscard]] double displacement(double t) const;
};

/// Limited slope from a window of three cell averages:
/// minmod(2(u0-um), 2(up-u0), (up-um)/2).
double mc_reconstruct(double um, double u0, double up);

/// Fifth-order WENO edge values of the center cell of a five-cell window
/// (Jiang-Shu smoothness indicators, eps = 1e-6).
struct CellEdgeValues {
    double right; // value at the right edge, biased from the left
    double left;  // value at the left edge, biased from the right
};
CellEdgeValues weno5_reconstruct(const std::array<double, 5>& window);

/// Abstract right-hand side with wave-speed reporting; what the time
/// integrator drives.
class Problem {
  public:
    virtual ~Problem() = default;

    [[nodiscard]] virtual int size() const = 0;
    /// Writes du/dt into dudt and returns the maximum characteristic speed.
    virtual double rhs(double t, std::span<const double> u, std::span<double> dudt) const = 0;
    /// Maximum characteristic speed alone (no flux assembly).
    [[nodiscard]] virtual double max_wave_speed(double t, std::span<const double> u) const = 0;
    [[nodiscard]] virtual double dx() const = 0;
    [[nodiscard]] virtual double cfl_fe() const = 0;
    /// Total variation of the state in the problem's natural variables.
    [[nodiscard]] virtual double total_variation(std::span<const double> u) const = 0;

    /// cfl_fe * dx / a_max; +infinity when the state carries no waves.
    [[nodiscard]] double h_fe_from_speed(double a_max) const;
};

/// Forward-Euler permissible step for the given state.
double h_fe(const Problem& problem, double t, std::span<const double> u);

class SemiDiscreteProblem final : public Problem {
  public:
    SemiDiscreteProblem(Grid1D grid, Reconstruction recon, PhysicsKind physics,
                        Boundary bc_left, Boundary bc_right, double cfl = 0.5);

    [[nodiscard]] int n_components() const { return physics_ == PhysicsKind::Euler ? 3 : 1; }
    [[nodiscard]] int n_cells() const { return grid_.n_cells; }
    [[nodiscard]] const Grid1D& grid() const { return grid_; }
    [[nodiscard]] PhysicsKind physics() const { return physics_; }
    [[nodiscard]] Reconstruction reconstruction() const { return recon_; }

    [[nodiscard]] int size() const override { return n_components() * grid_.n_cells; }
    double rhs(double t, std::span<const double> u, std::span<double> dudt) const override;
    [[nodiscard]] double max_wave_speed(double t, std::span<const double> u) const override;
    [[nodiscard]] double dx() const override { return grid_.dx(); }
    [[nodiscard]] double cfl_fe() const override { return cfl_; }
    [[nodiscard]] double total_variation(std::span<const double> u) const override;

    AdvectionSpeed speed;   // advection physics only
    double gas_gamma = 1.4; // Euler physics only

    /// Variable-coefficient advection of a sinusoid on [0,1], periodic.
    static SemiDiscreteProblem advection(int n_cells, Reconstruction recon,
                                         double cfl = 0.5);
    /// Burgers on [0,1], periodic.
    static SemiDiscreteProblem burgers(int n_cells, Reconstruction recon,
                                       double cfl = 0.5);
    /// Woodward-Colella blast wave on [0,1], reflecting walls.  Always uses
    /// the TVD reconstruction.
    static SemiDiscreteProblem blastwave(int n_cells, double cfl = 0.5);

    [[nodiscard]] std::vector<double> initial_state() const;
    /// Exact advected profile at time t (advection physics only), sampled at
    /// cell centers like the initial state.
    [[nodiscard]] std::vector<double> advection_exact_state(double t) const;

  private:
    Grid1D grid_;
    Reconstruction recon_;
    PhysicsKind physics_;
    Boundary bc_left_;
    Boundary bc_right_;
    double cfl_;

    mutable std::vector<double> work_; // ghost-extended scratch

    double rhs_scalar(double t, std::span<const double> u, std::span<double> dudt) const;
    double rhs_euler(std::span<const double> u, std::span<double> dudt) const;
    void fill_ghosts_scalar(std::span<const double> u) const;
};

/// "advection", "burgers" or "blastwave"; reconstruction chosen by temporal
/// order (blast wave always TVD).
std::unique_ptr<SemiDiscreteProblem> make_problem(const std::string& name, int n_cells,
                                                  int temporal_order, double cfl = 0.5);

} // namespace ssplmm
