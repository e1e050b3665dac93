#include "ssplmm/formula.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace ssplmm {

namespace {

constexpr double kTieTol = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();

// Exact small integer power; keeps 0^0 == 1 in the order conditions.
double pow_i(double x, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i)
        r *= x;
    return r;
}

void check_k(const RatioHistory& ratios) {
    if (ratios.k() < 1 || ratios.Omegas.size() != ratios.omegas.size() + 1)
        throw DomainError("RatioHistory: inconsistent sizes");
}

// Solves the (possibly overdetermined) system A x = b for n <= 3 unknowns by
// Gaussian elimination with partial pivoting on the leading square block,
// falling back to normal equations when there are fewer unknowns than rows.
std::vector<double> solve_small(std::vector<std::vector<double>> a, std::vector<double> b,
                                size_t n_unknowns) {
    const size_t rows = a.size();
    if (n_unknowns < rows) {
        // normal equations A^T A x = A^T b
        std::vector<std::vector<double>> ata(n_unknowns, std::vector<double>(n_unknowns, 0.0));
        std::vector<double> atb(n_unknowns, 0.0);
        for (size_t i = 0; i < n_unknowns; ++i) {
            for (size_t j = 0; j < n_unknowns; ++j)
                for (size_t r = 0; r < rows; ++r)
                    ata[i][j] += a[r][i] * a[r][j];
            for (size_t r = 0; r < rows; ++r)
                atb[i] += a[r][i] * b[r];
        }
        a = std::move(ata);
        b = std::move(atb);
    }
    const size_t n = n_unknowns;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) < 1e-14)
            throw DomainError("formula_from_support: singular order-condition system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t col = n; col-- > 0;) {
        double s = b[col];
        for (size_t c = col + 1; c < n; ++c)
            s -= a[col][c] * x[c];
        x[col] = s / a[col][col];
    }
    return x;
}

} // namespace

RatioHistory RatioHistory::fixed_step(int k) {
    RatioHistory rh;
    rh.omegas.assign(static_cast<size_t>(k), 1.0);
    rh.Omegas.resize(static_cast<size_t>(k) + 1);
    for (int j = 0; j <= k; ++j)
        rh.Omegas[static_cast<size_t>(j)] = static_cast<double>(j);
    return rh;
}

RatioHistory RatioHistory::from_omegas(std::vector<double> omegas) {
    if (omegas.empty())
        throw DomainError("RatioHistory: empty ratio list");
    for (double w : omegas)
        if (!(w > 0.0))
            throw NonPositiveStep("RatioHistory: ratios must be positive");
    if (std::abs(omegas.back() - 1.0) > 1e-12)
        throw DomainError("RatioHistory: last ratio w_k must equal 1");
    omegas.back() = 1.0;
    RatioHistory rh;
    rh.omegas = std::move(omegas);
    rh.Omegas.resize(rh.omegas.size() + 1);
    rh.Omegas[0] = 0.0;
    for (size_t j = 0; j + 1 < rh.omegas.size(); ++j)
        rh.Omegas[j + 1] = rh.Omegas[j] + rh.omegas[j];
    rh.Omegas.back() = rh.Omegas[rh.Omegas.size() - 2] + 1.0;
    return rh;
}

RatioHistory build_ratio_history(std::span<const double> recent_steps) {
    if (recent_steps.empty())
        throw DomainError("build_ratio_history: no step sizes given");
    for (double h : recent_steps)
        if (!(h > 0.0))
            throw NonPositiveStep("build_ratio_history: step sizes must be positive");
    const double h_n = recent_steps.back();
    std::vector<double> omegas(recent_steps.size());
    for (size_t j = 0; j < recent_steps.size(); ++j)
        omegas[j] = recent_steps[j] / h_n;
    omegas.back() = 1.0;
    return RatioHistory::from_omegas(std::move(omegas));
}

SspCoeff ssp_coefficient(std::span<const double> alphas, std::span<const double> betas) {
    if (alphas.size() != betas.size())
        throw LengthMismatch("ssp_coefficient: coefficient lengths differ");
    for (size_t j = 0; j < alphas.size(); ++j)
        if (alphas[j] < 0.0 || betas[j] < 0.0)
            return SspCoeff::finite(0.0);
    double c = kInf;
    for (size_t j = 0; j < alphas.size(); ++j)
        if (betas[j] > 0.0)
            c = std::min(c, alphas[j] / betas[j]);
    if (std::isinf(c))
        return SspCoeff::unbounded();
    return SspCoeff::finite(c);
}

double upper_bound(double Omega_k, int p) {
    if (Omega_k <= static_cast<double>(p))
        return 0.0;
    return (Omega_k - static_cast<double>(p)) / (Omega_k - 1.0);
}

FormulaCoefficients make_second_order(const RatioHistory& ratios) {
    check_k(ratios);
    const int k = ratios.k();
    if (k < 3)
        throw DomainError("make_second_order: requires k >= 3");
    const double W = ratios.Omega_km1();
    if (ratios.Omega_k() <= 2.0)
        throw InfeasibleOrder("make_second_order: requires Omega_k > 2");

    FormulaCoefficients f;
    f.k = k;
    f.order = 2;
    f.alphas.assign(static_cast<size_t>(k), 0.0);
    f.betas.assign(static_cast<size_t>(k), 0.0);
    f.alphas[static_cast<size_t>(k) - 1] = (W * W - 1.0) / (W * W);
    f.betas[static_cast<size_t>(k) - 1] =
        f.alphas[static_cast<size_t>(k) - 1] * W / (W - 1.0);
    f.alphas[0] = 1.0 / (W * W);
    f.ssp_coeff = SspCoeff::finite((ratios.Omega_k() - 2.0) / (ratios.Omega_k() - 1.0));
    return f;
}

FormulaCoefficients make_third_order(const RatioHistory& ratios) {
    check_k(ratios);
    const int k = ratios.k();
    if (k != 4 && k != 5)
        throw DomainError("make_third_order: requires k = 4 or k = 5");
    const double W = ratios.Omega_km1();
    if (W <= 2.0)
        throw InfeasibleOrder("make_third_order: requires Omega_{k-1} > 2");

    FormulaCoefficients f;
    f.k = k;
    f.order = 3;
    f.alphas.assign(static_cast<size_t>(k), 0.0);
    f.betas.assign(static_cast<size_t>(k), 0.0);
    const double W2 = W * W;
    const double W3 = W2 * W;
    f.betas[static_cast<size_t>(k) - 1] = (W + 1.0) * (W + 1.0) / W2;
    f.betas[0] = (W + 1.0) / W2;
    f.alphas[static_cast<size_t>(k) - 1] = (W + 1.0) * (W + 1.0) * (W - 2.0) / W3;
    f.alphas[0] = (3.0 * W + 2.0) / W3;

    const double window_hi = 2.0 * (1.0 + std::sqrt(2.0));
    if (W > window_hi) {
        f.outside_optimal_window = true;
        f.ssp_coeff = SspCoeff::finite((3.0 * W + 2.0) / (W * (W + 1.0)));
    } else {
        f.ssp_coeff = SspCoeff::finite((W - 2.0) / W);
    }
    return f;
}

double cubic_root(double Delta_j, double Delta_j1) {
    if (!(1.0 < Delta_j1 && Delta_j1 < Delta_j))
        throw DomainError("cubic_root: requires 1 < Delta_{j+1} < Delta_j");
    const bool exists = (Delta_j1 * Delta_j1 - (Delta_j + 1.0) * Delta_j1 + 3.0 * Delta_j > 0.0) ||
                        (Delta_j < 5.0 + 2.0 * std::sqrt(6.0));
    if (!exists)
        return kInf;

    const double c3 = Delta_j * Delta_j1;
    const double c2 = -(Delta_j * Delta_j1 + Delta_j + Delta_j1);
    const double c1 = 2.0 * (Delta_j + Delta_j1 + 1.0);
    const double c0 = -6.0;
    auto p = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    auto dp = [&](double x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };

    // P(0) = -6 and the unique root is positive, so expand the bracket from a
    // scale set by the linear term until the sign changes.
    double lo = 0.0;
    double hi = 6.0 / c1;
    while (p(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 80 && hi - lo > 1e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double d = dp(x);
        if (d == 0.0)
            break;
        const double step = p(x) / d;
        const double next = x - step;
        if (next <= lo || next >= hi)
            break;
        x = next;
        if (std::abs(step) <= 1e-15 * std::abs(x))
            break;
    }
    return x;
}

std::string CoeffName::str() const {
    std::ostringstream os;
    os << (kind == CoeffKind::Delta ? "delta_" : "beta_") << index;
    return os.str();
}

ThirdOrderCertificate third_order_certificate(const RatioHistory& ratios) {
    check_k(ratios);
    const int k = ratios.k();
    if (k < 2)
        throw DomainError("third_order_certificate: requires k >= 2");
    const double Wk = ratios.Omega_k();
    if (Wk <= 3.0)
        throw InfeasibleOrder("third_order_certificate: requires Omega_k > 3");

    ThirdOrderCertificate cert;
    cert.k = k;
    std::vector<std::set<CoeffName>> supports;

    auto d = [](int j) { return CoeffName{CoeffKind::Delta, j}; };
    auto b = [](int j) { return CoeffName{CoeffKind::Beta, j}; };

    // r_0
    cert.r_values.push_back((Wk - 3.0) / (Wk - 1.0));
    supports.push_back({d(0), b(0), b(k - 1)});

    // r_j for 1 <= j <= k-2: the larger of a bound-type and a spacing-type
    // expression, with the support set depending on which one is active.
    for (int j = 1; j <= k - 2; ++j) {
        const double e1 = (Wk - ratios.Omega(j) - 3.0) / (Wk - ratios.Omega(j) - 1.0);
        const double e2 = 2.0 / ratios.omega(j) + 1.0 / (Wk - ratios.Omega(j - 1));
        cert.r_values.push_back(std::max(e1, e2));
        if (std::abs(e1 - e2) <= kTieTol) {
            supports.push_back({d(j), b(j - 1), b(j), b(k - 1)});
            cert.borderline_max_indices.push_back(j);
        } else if (e1 > e2) {
            supports.push_back({d(j), b(j), b(k - 1)});
        } else {
            supports.push_back({d(j), b(j - 1), b(j)});
        }
    }

    // r_{k-1}
    cert.r_values.push_back(2.0 / ratios.omega(k - 1) + 1.0 / (Wk - ratios.Omega(k - 2)));
    supports.push_back({d(k - 1), b(k - 2), b(k - 1)});

    // r_{k+j} for 0 <= j <= k-3: real cubic roots where they exist.
    for (int j = 0; j <= k - 3; ++j) {
        const double Dj = Wk - ratios.Omega(j);
        const double Dj1 = Wk - ratios.Omega(j + 1);
        cert.r_values.push_back(cubic_root(Dj, Dj1));
        supports.push_back({b(j), b(j + 1), b(k - 1)});
    }

    double rmin = kInf;
    for (double r : cert.r_values)
        rmin = std::min(rmin, r);
    cert.optimal_C = rmin;
    for (size_t i = 0; i < cert.r_values.size(); ++i)
        if (cert.r_values[i] - rmin <= kTieTol)
            cert.argmin_indices.push_back(static_cast<int>(i));
    cert.unique_argmin = cert.argmin_indices.size() == 1;

    std::set<CoeffName> inter = supports[static_cast<size_t>(cert.argmin_indices[0])];
    for (size_t m = 1; m < cert.argmin_indices.size(); ++m) {
        const auto& s = supports[static_cast<size_t>(cert.argmin_indices[m])];
        std::set<CoeffName> next;
        for (const auto& c : inter)
            if (s.count(c))
                next.insert(c);
        inter = std::move(next);
    }
    cert.support.assign(inter.begin(), inter.end());
    return cert;
}

std::vector<double> verify_order(const FormulaCoefficients& formula,
                                 const RatioHistory& ratios, int p) {
    check_k(ratios);
    if (formula.alphas.size() != formula.betas.size() ||
        static_cast<int>(formula.alphas.size()) != ratios.k())
        throw LengthMismatch("verify_order: coefficient/ratio lengths differ");
    const int k = ratios.k();
    std::vector<double> res(static_cast<size_t>(p) + 1, 0.0);
    double s0 = 0.0;
    for (int j = 0; j < k; ++j)
        s0 += formula.alphas[static_cast<size_t>(j)];
    res[0] = s0 - 1.0;
    for (int m = 1; m <= p; ++m) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) {
            const double W = ratios.Omega(j);
            s += pow_i(W, m) * formula.alphas[static_cast<size_t>(j)] +
                 m * pow_i(W, m - 1) * formula.betas[static_cast<size_t>(j)];
        }
        res[static_cast<size_t>(m)] = s - pow_i(ratios.Omega_k(), m);
    }
    return res;
}

FormulaCoefficients formula_from_support(const RatioHistory& ratios, double r,
                                         std::span<const CoeffName> support) {
    check_k(ratios);
    const int k = ratios.k();
    if (support.empty() || support.size() > 3)
        throw DomainError("formula_from_support: support must hold 1..3 coefficients");

    // Order conditions m = 0..2 restricted to the support, linear in
    // (delta, beta) for fixed r.  Column of delta_j in condition m is W_j^m;
    // column of beta_j is r W_j^m + m W_j^{m-1}.
    std::vector<std::vector<double>> a(3, std::vector<double>(support.size(), 0.0));
    std::vector<double> rhs(3);
    for (int m = 0; m <= 2; ++m) {
        rhs[static_cast<size_t>(m)] = pow_i(ratios.Omega_k(), m);
        for (size_t c = 0; c < support.size(); ++c) {
            const double W = ratios.Omega(support[c].index);
            if (support[c].kind == CoeffKind::Delta)
                a[static_cast<size_t>(m)][c] = pow_i(W, m);
            else
                a[static_cast<size_t>(m)][c] = r * pow_i(W, m) + m * pow_i(W, m - 1);
        }
    }
    const std::vector<double> x = solve_small(a, rhs, support.size());

    FormulaCoefficients f;
    f.k = k;
    f.order = 3;
    f.alphas.assign(static_cast<size_t>(k), 0.0);
    f.betas.assign(static_cast<size_t>(k), 0.0);
    std::vector<double> deltas(static_cast<size_t>(k), 0.0);
    for (size_t c = 0; c < support.size(); ++c) {
        if (support[c].kind == CoeffKind::Delta)
            deltas[static_cast<size_t>(support[c].index)] = x[c];
        else
            f.betas[static_cast<size_t>(support[c].index)] = x[c];
    }
    for (int j = 0; j < k; ++j)
        f.alphas[static_cast<size_t>(j)] =
            deltas[static_cast<size_t>(j)] + r * f.betas[static_cast<size_t>(j)];
    f.ssp_coeff = SspCoeff::finite(r);

    const std::vector<double> res = verify_order(f, ratios, 3);
    for (double re : res)
        if (std::abs(re) > 1e-10 * std::max(1.0, pow_i(ratios.Omega_k(), 3)))
            throw DomainError("formula_from_support: order conditions not satisfied "
                              "by the requested support");
    return f;
}

} // namespace ssplmm
