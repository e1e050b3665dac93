#pragma once

// Construction of variable step-size SSP linear multistep formulae: optimal
// second- and third-order coefficient families, SSP coefficients, upper
// bounds, and optimality certificates derived from a step-ratio history.

#include <span>
#include <string>
#include <vector>

#include "ssplmm/errors.hpp"

namespace ssplmm {

/// A non-negative SSP coefficient, or the unbounded sentinel (the constraint
/// set places no restriction on the step size).  Never a large float.
class SspCoeff {
  public:
    static SspCoeff finite(double v) { return SspCoeff(v, false); }
    static SspCoeff unbounded() { return SspCoeff(0.0, true); }

    [[nodiscard]] bool is_unbounded() const { return unbounded_; }

    /// Finite value; throws DomainError when unbounded.
    [[nodiscard]] double value() const {
        if (unbounded_)
            throw DomainError("SspCoeff: value() called on unbounded coefficient");
        return value_;
    }

    bool operator==(const SspCoeff& other) const {
        return unbounded_ == other.unbounded_ && (unbounded_ || value_ == other.value_);
    }

  private:
    SspCoeff(double v, bool unbounded) : value_(v), unbounded_(unbounded) {}
    double value_;
    bool unbounded_;
};

/// Step-size ratios of the k steps ending at the current one, and their
/// cumulative sums.  omegas holds w_1..w_k with w_k == 1 by construction;
/// Omegas holds W_0..W_k with W_0 == 0 and W_k == W_{k-1} + 1 exactly.
/// Fixed steps give W_j == j.
struct RatioHistory {
    std::vector<double> omegas;
    std::vector<double> Omegas;

    [[nodiscard]] int k() const { return static_cast<int>(omegas.size()); }

    /// w_j, 1-based as in the recurrence notation.
    [[nodiscard]] double omega(int j) const { return omegas[static_cast<size_t>(j) - 1]; }
    /// W_j, 0-based up to j = k.
    [[nodiscard]] double Omega(int j) const { return Omegas[static_cast<size_t>(j)]; }

    [[nodiscard]] double Omega_k() const { return Omegas.back(); }
    [[nodiscard]] double Omega_km1() const { return Omegas[Omegas.size() - 2]; }

    /// History of k equal steps.
    static RatioHistory fixed_step(int k);
    /// Build directly from ratios w_1..w_k (the last entry must equal 1).
    static RatioHistory from_omegas(std::vector<double> omegas);
};

/// w_j = h_{n-k+j} / h_n from the last k step sizes, oldest first.
RatioHistory build_ratio_history(std::span<const double> recent_steps);

/// One step's multistep-formula coefficients together with its SSP
/// coefficient.  delta_j = alpha_j - C * beta_j is derived, not stored.
struct FormulaCoefficients {
    int k = 0;
    int order = 0;
    std::vector<double> alphas;
    std::vector<double> betas;
    SspCoeff ssp_coeff = SspCoeff::finite(0.0);
    /// Third order only: the ratio history fell beyond the window in which
    /// the two-support family is optimal; coefficients remain valid but the
    /// SSP coefficient is the smaller secondary-branch value.
    bool outside_optimal_window = false;

    [[nodiscard]] double delta(int j) const {
        return alphas[static_cast<size_t>(j)] -
               ssp_coeff.value() * betas[static_cast<size_t>(j)];
    }
};

/// Largest r with alpha_j - r beta_j >= 0 for all j: 0 if any coefficient is
/// negative, unbounded if every beta_j is zero, else min alpha_j/beta_j over
/// beta_j > 0.  Total function.
SspCoeff ssp_coefficient(std::span<const double> alphas, std::span<const double> betas);

/// Sharp bound on the SSP coefficient of any k-step formula of order p >= 2:
/// zero for W_k <= p, else (W_k - p)/(W_k - 1).
double upper_bound(double Omega_k, int p);

/// Optimal second-order formula (k >= 3): nonzero coefficients at positions
/// n-1 and n-k only.  Throws InfeasibleOrder when W_k <= 2.
FormulaCoefficients make_second_order(const RatioHistory& ratios);

/// Third-order formula with support at positions n-1 and n-k (k = 4 or 5).
/// Throws InfeasibleOrder when W_{k-1} <= 2.  Beyond W_{k-1} = 2(1+sqrt 2)
/// the coefficients stay valid but are no longer optimal; the returned SSP
/// coefficient switches to the secondary branch and the
/// outside_optimal_window flag is set.
FormulaCoefficients make_third_order(const RatioHistory& ratios);

/// Unique real root of the cubic
///   P(x) = Dj*Dj1*x^3 - (Dj*Dj1 + Dj + Dj1)*x^2 + 2(Dj + Dj1 + 1)*x - 6
/// when it exists (root found by bracketed bisection plus Newton polish,
/// relative tolerance 1e-14); +infinity otherwise.  Requires 1 < Dj1 < Dj.
double cubic_root(double Delta_j, double Delta_j1);

enum class CoeffKind { Delta, Beta };

/// Names one formula coefficient (delta_j or beta_j) in a support set.
struct CoeffName {
    CoeffKind kind;
    int index;

    bool operator==(const CoeffName&) const = default;
    auto operator<=>(const CoeffName&) const = default;
    [[nodiscard]] std::string str() const;
};

/// Optimality certificate for third-order formulae: the full r_j catalogue,
/// all indices attaining the minimum (ties resolved with absolute tolerance
/// 1e-12), the intersected support set, and the optimal SSP coefficient.
struct ThirdOrderCertificate {
    int k = 0;
    std::vector<double> r_values;   // r_0..r_{2k-3}; +infinity allowed
    std::vector<int> argmin_indices;
    std::vector<CoeffName> support; // intersection over tied argmin sets
    double optimal_C = 0.0;
    bool unique_argmin = true;
    /// Indices 1 <= j <= k-2 whose two candidate expressions agree to within
    /// the tie tolerance; the support at such an index is the four-element
    /// union and the optimal formula is generally non-unique.
    std::vector<int> borderline_max_indices;
};

/// Computes the r_j catalogue and optimal SSP coefficient for third-order
/// k-step formulae.  Throws InfeasibleOrder when W_k <= 3.
ThirdOrderCertificate third_order_certificate(const RatioHistory& ratios);

/// Residuals of the order conditions: entry 0 is sum(alpha) - 1, entry m
/// (1 <= m <= p) is sum_j(W_j^m alpha_j + m W_j^{m-1} beta_j) - W_k^m.
std::vector<double> verify_order(const FormulaCoefficients& formula,
                                 const RatioHistory& ratios, int p);

/// Builds the concrete third-order formula with the given support (at most
/// three coefficients): solves the first three order conditions at the given
/// r and verifies the fourth to 1e-10.
FormulaCoefficients formula_from_support(const RatioHistory& ratios, double r,
                                         std::span<const CoeffName> support);

} // namespace ssplmm
