#include "ssplmm/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ssplmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0)
        return std::min(a, std::min(b, c));
    if (a < 0.0 && b < 0.0 && c < 0.0)
        return std::max(a, std::max(b, c));
    return 0.0;
}

// Left-biased fifth-order WENO value at the right edge of the center cell
// (Jiang-Shu weights, eps = 1e-6).
double weno5_edge(const double* v) {
    constexpr double eps = 1e-6;
    const double b0 = (13.0 / 12.0) * (v[0] - 2.0 * v[1] + v[2]) * (v[0] - 2.0 * v[1] + v[2]) +
                      0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]) * (v[0] - 4.0 * v[1] + 3.0 * v[2]);
    const double b1 = (13.0 / 12.0) * (v[1] - 2.0 * v[2] + v[3]) * (v[1] - 2.0 * v[2] + v[3]) +
                      0.25 * (v[1] - v[3]) * (v[1] - v[3]);
    const double b2 = (13.0 / 12.0) * (v[2] - 2.0 * v[3] + v[4]) * (v[2] - 2.0 * v[3] + v[4]) +
                      0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]) * (3.0 * v[2] - 4.0 * v[3] + v[4]);
    const double q0 = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0;
    const double q1 = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0;
    const double q2 = (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0;
    const double a0 = 0.1 / ((eps + b0) * (eps + b0));
    const double a1 = 0.6 / ((eps + b1) * (eps + b1));
    const double a2 = 0.3 / ((eps + b2) * (eps + b2));
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

double burgers_flux(double u) { return 0.5 * u * u; }

// Godunov flux for the convex Burgers flux.
double burgers_godunov(double ul, double ur) {
    if (ul <= ur) {
        if (ul <= 0.0 && 0.0 <= ur)
            return 0.0;
        return std::min(burgers_flux(ul), burgers_flux(ur));
    }
    return std::max(burgers_flux(ul), burgers_flux(ur));
}

// Local Lax-Friedrichs flux.
double burgers_llf(double ul, double ur) {
    const double a = std::max(std::abs(ul), std::abs(ur));
    return 0.5 * (burgers_flux(ul) + burgers_flux(ur)) - 0.5 * a * (ur - ul);
}

struct EulerPrim {
    double rho, v, p;
};

struct EulerFluxVec {
    double f0, f1, f2;
};

EulerFluxVec euler_flux(const EulerPrim& w, double gamma) {
    const double e = w.p / (gamma - 1.0) + 0.5 * w.rho * w.v * w.v;
    return {w.rho * w.v, w.rho * w.v * w.v + w.p, w.v * (e + w.p)};
}

EulerFluxVec hll_flux(const EulerPrim& wl, const EulerPrim& wr, double gamma) {
    const double cl = std::sqrt(gamma * wl.p / wl.rho);
    const double cr = std::sqrt(gamma * wr.p / wr.rho);
    const double sl = std::min(wl.v - cl, wr.v - cr);
    const double sr = std::max(wl.v + cl, wr.v + cr);
    const EulerFluxVec fl = euler_flux(wl, gamma);
    if (sl >= 0.0)
        return fl;
    const EulerFluxVec fr = euler_flux(wr, gamma);
    if (sr <= 0.0)
        return fr;
    const double el = wl.p / (gamma - 1.0) + 0.5 * wl.rho * wl.v * wl.v;
    const double er = wr.p / (gamma - 1.0) + 0.5 * wr.rho * wr.v * wr.v;
    const double inv = 1.0 / (sr - sl);
    return {(sr * fl.f0 - sl * fr.f0 + sl * sr * (wr.rho - wl.rho)) * inv,
            (sr * fl.f1 - sl * fr.f1 + sl * sr * (wr.rho * wr.v - wl.rho * wl.v)) * inv,
            (sr * fl.f2 - sl * fr.f2 + sl * sr * (er - el)) * inv};
}

[[noreturn]] void throw_nonphysical(const char* what, int cell, double value) {
    std::ostringstream os;
    os << "non-physical state: " << what << " = " << value << " at cell " << cell;
    throw NonPhysicalState(os.str());
}

} // namespace

double AdvectionSpeed::operator()(double t) const { return a0 + a1 * std::sin(kTwoPi * t); }

double AdvectionSpeed::displacement(double t) const {
    return a0 * t - a1 / kTwoPi * (std::cos(kTwoPi * t) - 1.0);
}

double mc_reconstruct(double um, double u0, double up) {
    return minmod3(2.0 * (u0 - um), 2.0 * (up - u0), 0.5 * (up - um));
}

CellEdgeValues weno5_reconstruct(const std::array<double, 5>& w) {
    CellEdgeValues e{};
    e.right = weno5_edge(w.data());
    const std::array<double, 5> rev{w[4], w[3], w[2], w[1], w[0]};
    e.left = weno5_edge(rev.data());
    return e;
}

double Problem::h_fe_from_speed(double a_max) const {
    if (a_max == 0.0)
        return kInf;
    return cfl_fe() * dx() / a_max;
}

double h_fe(const Problem& problem, double t, std::span<const double> u) {
    return problem.h_fe_from_speed(problem.max_wave_speed(t, u));
}

SemiDiscreteProblem::SemiDiscreteProblem(Grid1D grid, Reconstruction recon,
                                         PhysicsKind physics, Boundary bc_left,
                                         Boundary bc_right, double cfl)
    : grid_(grid), recon_(recon), physics_(physics), bc_left_(bc_left), bc_right_(bc_right),
      cfl_(cfl) {
    grid_.ghost = (recon == Reconstruction::Weno5) ? 3 : 2;
    if (grid_.n_cells < 2 * grid_.ghost)
        throw DomainError("SemiDiscreteProblem: grid too coarse for the stencil");
    if (physics_ == PhysicsKind::Euler &&
        (bc_left_ == Boundary::Periodic) != (bc_right_ == Boundary::Periodic))
        throw DomainError("SemiDiscreteProblem: periodic boundary must be two-sided");
}

void SemiDiscreteProblem::fill_ghosts_scalar(std::span<const double> u) const {
    const int n = grid_.n_cells;
    const int g = grid_.ghost;
    work_.resize(static_cast<size_t>(n + 2 * g));
    for (int i = 0; i < n; ++i)
        work_[static_cast<size_t>(g + i)] = u[static_cast<size_t>(i)];
    for (int i = 0; i < g; ++i) {
        switch (bc_left_) {
        case Boundary::Periodic:
            work_[static_cast<size_t>(g - 1 - i)] = u[static_cast<size_t>(n - 1 - i)];
            break;
        case Boundary::Reflecting:
            work_[static_cast<size_t>(g - 1 - i)] = u[static_cast<size_t>(i)];
            break;
        case Boundary::Outflow:
            work_[static_cast<size_t>(g - 1 - i)] = u[0];
            break;
        }
        switch (bc_right_) {
        case Boundary::Periodic:
            work_[static_cast<size_t>(g + n + i)] = u[static_cast<size_t>(i)];
            break;
        case Boundary::Reflecting:
            work_[static_cast<size_t>(g + n + i)] = u[static_cast<size_t>(n - 1 - i)];
            break;
        case Boundary::Outflow:
            work_[static_cast<size_t>(g + n + i)] = u[static_cast<size_t>(n - 1)];
            break;
        }
    }
}

double SemiDiscreteProblem::rhs_scalar(double t, std::span<const double> u,
                                       std::span<double> dudt) const {
    const int n = grid_.n_cells;
    const int g = grid_.ghost;
    fill_ghosts_scalar(u);
    const double* w = work_.data();

    double a_max;
    const double a = (physics_ == PhysicsKind::Advection) ? speed(t) : 0.0;
    if (physics_ == PhysicsKind::Advection) {
        a_max = std::abs(a);
    } else {
        a_max = 0.0;
        for (int i = 0; i < n; ++i)
            a_max = std::max(a_max, std::abs(u[static_cast<size_t>(i)]));
    }

    // interface fluxes F_{i+1/2} for i = -1..n-1 (extended cells j and j+1)
    std::vector<double> flux(static_cast<size_t>(n) + 1);
    if (recon_ == Reconstruction::MC) {
        for (int i = -1; i < n; ++i) {
            const int j = g + i;
            const double sl = mc_reconstruct(w[j - 1], w[j], w[j + 1]);
            const double sr = mc_reconstruct(w[j], w[j + 1], w[j + 2]);
            const double ul = w[j] + 0.5 * sl;
            const double ur = w[j + 1] - 0.5 * sr;
            flux[static_cast<size_t>(i + 1)] =
                (physics_ == PhysicsKind::Advection)
                    ? (a >= 0.0 ? a * ul : a * ur)
                    : burgers_godunov(ul, ur);
        }
    } else {
        for (int i = -1; i < n; ++i) {
            const int j = g + i;
            const double ul = weno5_edge(&w[j - 2]);
            const double revr[5] = {w[j + 3], w[j + 2], w[j + 1], w[j], w[j - 1]};
            const double ur = weno5_edge(revr);
            flux[static_cast<size_t>(i + 1)] =
                (physics_ == PhysicsKind::Advection)
                    ? (a >= 0.0 ? a * ul : a * ur)
                    : burgers_llf(ul, ur);
        }
    }

    const double inv_dx = 1.0 / grid_.dx();
    for (int i = 0; i < n; ++i)
        dudt[static_cast<size_t>(i)] =
            -(flux[static_cast<size_t>(i + 1)] - flux[static_cast<size_t>(i)]) * inv_dx;
    return a_max;
}

double SemiDiscreteProblem::rhs_euler(std::span<const double> u, std::span<double> dudt) const {
    const int n = grid_.n_cells;
    const int g = grid_.ghost;
    const int ne = n + 2 * g;
    const double gamma = gas_gamma;

    // ghost-extended conserved components
    work_.resize(static_cast<size_t>(6 * ne));
    double* rho = work_.data();
    double* mom = rho + ne;
    double* ene = mom + ne;
    double* prho = ene + ne; // primitives
    double* pvel = prho + ne;
    double* ppre = pvel + ne;

    auto set_ext = [&](int j, int src, double msign) {
        rho[j] = u[static_cast<size_t>(src)];
        mom[j] = msign * u[static_cast<size_t>(n + src)];
        ene[j] = u[static_cast<size_t>(2 * n + src)];
    };
    for (int i = 0; i < n; ++i)
        set_ext(g + i, i, 1.0);
    for (int i = 0; i < g; ++i) {
        switch (bc_left_) {
        case Boundary::Periodic:
            set_ext(g - 1 - i, n - 1 - i, 1.0);
            break;
        case Boundary::Reflecting:
            set_ext(g - 1 - i, i, -1.0);
            break;
        case Boundary::Outflow:
            set_ext(g - 1 - i, 0, 1.0);
            break;
        }
        switch (bc_right_) {
        case Boundary::Periodic:
            set_ext(g + n + i, i, 1.0);
            break;
        case Boundary::Reflecting:
            set_ext(g + n + i, n - 1 - i, -1.0);
            break;
        case Boundary::Outflow:
            set_ext(g + n + i, n - 1, 1.0);
            break;
        }
    }

    double a_max = 0.0;
    for (int j = 0; j < ne; ++j) {
        if (!(rho[j] > 0.0))
            throw_nonphysical("density", j - g, rho[j]);
        const double v = mom[j] / rho[j];
        const double p = (gamma - 1.0) * (ene[j] - 0.5 * rho[j] * v * v);
        if (!(p > 0.0))
            throw_nonphysical("pressure", j - g, p);
        prho[j] = rho[j];
        pvel[j] = v;
        ppre[j] = p;
        if (j >= g && j < g + n)
            a_max = std::max(a_max, std::abs(v) + std::sqrt(gamma * p / rho[j]));
    }

    std::vector<EulerFluxVec> flux(static_cast<size_t>(n) + 1);
    if (recon_ == Reconstruction::MC) {
        for (int i = -1; i < n; ++i) {
            const int j = g + i;
            EulerPrim wl{}, wr{};
            const double* fields[3] = {prho, pvel, ppre};
            double* lv[3] = {&wl.rho, &wl.v, &wl.p};
            double* rv[3] = {&wr.rho, &wr.v, &wr.p};
            for (int c = 0; c < 3; ++c) {
                const double* q = fields[c];
                const double sl = mc_reconstruct(q[j - 1], q[j], q[j + 1]);
                const double sr = mc_reconstruct(q[j], q[j + 1], q[j + 2]);
                *lv[c] = q[j] + 0.5 * sl;
                *rv[c] = q[j + 1] - 0.5 * sr;
            }
            flux[static_cast<size_t>(i + 1)] = hll_flux(wl, wr, gamma);
        }
    } else {
        // characteristic-wise WENO about the Roe average of each interface
        for (int i = -1; i < n; ++i) {
            const int j = g + i;
            const double srl = std::sqrt(prho[j]);
            const double srr = std::sqrt(prho[j + 1]);
            const double hl = (ene[j] + ppre[j]) / prho[j];
            const double hr = (ene[j + 1] + ppre[j + 1]) / prho[j + 1];
            const double vh = (srl * pvel[j] + srr * pvel[j + 1]) / (srl + srr);
            const double hh = (srl * hl + srr * hr) / (srl + srr);
            const double c2 = (gamma - 1.0) * (hh - 0.5 * vh * vh);
            const double ch = std::sqrt(std::max(c2, 1e-300));
            const double b1 = (gamma - 1.0) / (ch * ch);
            const double b2 = 0.5 * b1 * vh * vh;

            auto to_char = [&](double q0, double q1, double q2, double* out) {
                out[0] = 0.5 * ((b2 + vh / ch) * q0 - (b1 * vh + 1.0 / ch) * q1 + b1 * q2);
                out[1] = (1.0 - b2) * q0 + b1 * vh * q1 - b1 * q2;
                out[2] = 0.5 * ((b2 - vh / ch) * q0 - (b1 * vh - 1.0 / ch) * q1 + b1 * q2);
            };
            double cw[3][6];
            for (int m = 0; m < 6; ++m) {
                const int jj = j - 2 + m;
                double out[3];
                to_char(rho[jj], mom[jj], ene[jj], out);
                cw[0][m] = out[0];
                cw[1][m] = out[1];
                cw[2][m] = out[2];
            }
            double wlh[3], wrh[3];
            for (int c = 0; c < 3; ++c) {
                wlh[c] = weno5_edge(&cw[c][0]);
                const double rev[5] = {cw[c][5], cw[c][4], cw[c][3], cw[c][2], cw[c][1]};
                wrh[c] = weno5_edge(rev);
            }
            auto from_char = [&](const double* wch, double& q0, double& q1, double& q2) {
                q0 = wch[0] + wch[1] + wch[2];
                q1 = (vh - ch) * wch[0] + vh * wch[1] + (vh + ch) * wch[2];
                q2 = (hh - vh * ch) * wch[0] + 0.5 * vh * vh * wch[1] + (hh + vh * ch) * wch[2];
            };
            auto to_prim = [&](double q0, double q1, double q2, EulerPrim& w, int fallback) {
                w.rho = q0;
                w.v = q1 / q0;
                w.p = (gamma - 1.0) * (q2 - 0.5 * q1 * q1 / q0);
                if (!(w.rho > 0.0) || !(w.p > 0.0)) {
                    // reconstruction overshoot into a non-physical state:
                    // drop to the adjacent cell value at this interface
                    w.rho = prho[fallback];
                    w.v = pvel[fallback];
                    w.p = ppre[fallback];
                }
            };
            double q0, q1, q2;
            EulerPrim wl{}, wr{};
            from_char(wlh, q0, q1, q2);
            to_prim(q0, q1, q2, wl, j);
            from_char(wrh, q0, q1, q2);
            to_prim(q0, q1, q2, wr, j + 1);
            flux[static_cast<size_t>(i + 1)] = hll_flux(wl, wr, gamma);
        }
    }

    const double inv_dx = 1.0 / grid_.dx();
    for (int i = 0; i < n; ++i) {
        dudt[static_cast<size_t>(i)] =
            -(flux[static_cast<size_t>(i + 1)].f0 - flux[static_cast<size_t>(i)].f0) * inv_dx;
        dudt[static_cast<size_t>(n + i)] =
            -(flux[static_cast<size_t>(i + 1)].f1 - flux[static_cast<size_t>(i)].f1) * inv_dx;
        dudt[static_cast<size_t>(2 * n + i)] =
            -(flux[static_cast<size_t>(i + 1)].f2 - flux[static_cast<size_t>(i)].f2) * inv_dx;
    }
    return a_max;
}

double SemiDiscreteProblem::rhs(double t, std::span<const double> u,
                                std::span<double> dudt) const {
    if (static_cast<int>(u.size()) != size() || static_cast<int>(dudt.size()) != size())
        throw LengthMismatch("rhs: state size does not match the grid");
    if (physics_ == PhysicsKind::Euler)
        return rhs_euler(u, dudt);
    return rhs_scalar(t, u, dudt);
}

double SemiDiscreteProblem::max_wave_speed(double t, std::span<const double> u) const {
    const int n = grid_.n_cells;
    switch (physics_) {
    case PhysicsKind::Advection:
        return std::abs(speed(t));
    case PhysicsKind::Burgers: {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            m = std::max(m, std::abs(u[static_cast<size_t>(i)]));
        return m;
    }
    case PhysicsKind::Euler: {
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            const double rho = u[static_cast<size_t>(i)];
            if (!(rho > 0.0))
                throw_nonphysical("density", i, rho);
            const double v = u[static_cast<size_t>(n + i)] / rho;
            const double p =
                (gas_gamma - 1.0) * (u[static_cast<size_t>(2 * n + i)] - 0.5 * rho * v * v);
            if (!(p > 0.0))
                throw_nonphysical("pressure", i, p);
            m = std::max(m, std::abs(v) + std::sqrt(gas_gamma * p / rho));
        }
        return m;
    }
    }
    return 0.0;
}

double SemiDiscreteProblem::total_variation(std::span<const double> u) const {
    const int n = grid_.n_cells;
    if (physics_ != PhysicsKind::Euler) {
        double tv = 0.0;
        for (int i = 0; i + 1 < n; ++i)
            tv += std::abs(u[static_cast<size_t>(i + 1)] - u[static_cast<size_t>(i)]);
        if (bc_left_ == Boundary::Periodic)
            tv += std::abs(u[0] - u[static_cast<size_t>(n - 1)]);
        return tv;
    }

    // Euler: total variation of the characteristic variables, measured by
    // Roe wave strengths across interior interfaces.
    const double gamma = gas_gamma;
    double tv = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double rl = u[static_cast<size_t>(i)];
        const double rr = u[static_cast<size_t>(i + 1)];
        const double ml = u[static_cast<size_t>(n + i)];
        const double mr = u[static_cast<size_t>(n + i + 1)];
        const double el = u[static_cast<size_t>(2 * n + i)];
        const double er = u[static_cast<size_t>(2 * n + i + 1)];
        const double vl = ml / rl;
        const double vr = mr / rr;
        const double pl = (gamma - 1.0) * (el - 0.5 * rl * vl * vl);
        const double pr = (gamma - 1.0) * (er - 0.5 * rr * vr * vr);
        const double srl = std::sqrt(rl);
        const double srr = std::sqrt(rr);
        const double vh = (srl * vl + srr * vr) / (srl + srr);
        const double hh = (srl * (el + pl) / rl + srr * (er + pr) / rr) / (srl + srr);
        const double ch = std::sqrt(std::max((gamma - 1.0) * (hh - 0.5 * vh * vh), 1e-300));
        const double drho = rr - rl;
        const double dmom = mr - ml;
        const double dene = er - el;
        const double a2 = (gamma - 1.0) / (ch * ch) * (drho * (hh - vh * vh) + vh * dmom - dene);
        const double a1 = (drho * (vh + ch) - dmom) / (2.0 * ch) - 0.5 * a2;
        const double a3 = drho - a1 - a2;
        tv += std::abs(a1) + std::abs(a2) + std::abs(a3);
    }
    return tv;
}

SemiDiscreteProblem SemiDiscreteProblem::advection(int n_cells, Reconstruction recon,
                                                   double cfl) {
    return SemiDiscreteProblem({n_cells, 0.0, 1.0}, recon, PhysicsKind::Advection,
                               Boundary::Periodic, Boundary::Periodic, cfl);
}

SemiDiscreteProblem SemiDiscreteProblem::burgers(int n_cells, Reconstruction recon, double cfl) {
    return SemiDiscreteProblem({n_cells, 0.0, 1.0}, recon, PhysicsKind::Burgers,
                               Boundary::Periodic, Boundary::Periodic, cfl);
}

SemiDiscreteProblem SemiDiscreteProblem::blastwave(int n_cells, double cfl) {
    return SemiDiscreteProblem({n_cells, 0.0, 1.0}, Reconstruction::MC, PhysicsKind::Euler,
                               Boundary::Reflecting, Boundary::Reflecting, cfl);
}

std::vector<double> SemiDiscreteProblem::initial_state() const {
    const int n = grid_.n_cells;
    std::vector<double> u(static_cast<size_t>(size()));
    switch (physics_) {
    case PhysicsKind::Advection:
        for (int i = 0; i < n; ++i)
            u[static_cast<size_t>(i)] = std::sin(kTwoPi * grid_.center(i));
        break;
    case PhysicsKind::Burgers:
        for (int i = 0; i < n; ++i)
            u[static_cast<size_t>(i)] = 0.5 + std::sin(kTwoPi * grid_.center(i));
        break;
    case PhysicsKind::Euler:
        for (int i = 0; i < n; ++i) {
            const double x = grid_.center(i);
            const double p = (x < 0.1) ? 1000.0 : (x < 0.9 ? 0.01 : 100.0);
            u[static_cast<size_t>(i)] = 1.0;
            u[static_cast<size_t>(n + i)] = 0.0;
            u[static_cast<size_t>(2 * n + i)] = p / (gas_gamma - 1.0);
        }
        break;
    }
    return u;
}

std::vector<double> SemiDiscreteProblem::advection_exact_state(double t) const {
    if (physics_ != PhysicsKind::Advection)
        throw DomainError("advection_exact_state: advection physics only");
    const int n = grid_.n_cells;
    const double shift = speed.displacement(t);
    std::vector<double> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        u[static_cast<size_t>(i)] = std::sin(kTwoPi * (grid_.center(i) - shift));
    return u;
}

std::unique_ptr<SemiDiscreteProblem> make_problem(const std::string& name, int n_cells,
                                                  int temporal_order, double cfl) {
    const Reconstruction recon =
        (temporal_order >= 3) ? Reconstruction::Weno5 : Reconstruction::MC;
    if (name == "advection")
        return std::make_unique<SemiDiscreteProblem>(SemiDiscreteProblem::advection(n_cells, recon, cfl));
    if (name == "burgers")
        return std::make_unique<SemiDiscreteProblem>(SemiDiscreteProblem::burgers(n_cells, recon, cfl));
    if (name == "blastwave")
        return std::make_unique<SemiDiscreteProblem>(SemiDiscreteProblem::blastwave(n_cells, cfl));
    throw ConfigError("unknown problem '" + name + "' (expected advection, burgers or blastwave)");
}

} // namespace ssplmm
