#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lp_oracle.hpp"
#include "ssplmm/formula.hpp"
#include "test_support.hpp"

using namespace ssplmm;

namespace {

// Independent root oracle: plain bisection on the cubic's sign change,
// refined to 1e-12.
double cubic_root_oracle(double dj, double dj1) {
    auto p = [&](double x) {
        return dj * dj1 * x * x * x - (dj * dj1 + dj + dj1) * x * x +
               2.0 * (dj + dj1 + 1.0) * x - 6.0;
    };
    double lo = 0.0, hi = 1.0;
    while (p(hi) < 0.0)
        hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (p(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("ratio history from recent step sizes") {
    const double fixed[] = {1.0, 1.0, 1.0};
    RatioHistory rh = build_ratio_history(fixed);
    CHECK(rh.k() == 3);
    CHECK(rh.omegas == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(rh.Omegas == std::vector<double>{0.0, 1.0, 2.0, 3.0});

    const double shrinking[] = {2.0, 1.0, 0.5};
    rh = build_ratio_history(shrinking);
    CHECK(rh.omegas == std::vector<double>{4.0, 2.0, 1.0});
    CHECK(rh.Omegas == std::vector<double>{0.0, 4.0, 6.0, 7.0});

    const double four[] = {1.0, 1.0, 1.0, 2.0 / 3.0};
    rh = build_ratio_history(four);
    CHECK(rh.Omega(1) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(rh.Omega(2) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(rh.Omega(3) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(rh.Omega(4) == doctest::Approx(5.5).epsilon(1e-15));
    CHECK(rh.Omega_k() == rh.Omega_km1() + 1.0); // exact by construction

    const double bad[] = {1.0, -0.5, 1.0};
    CHECK_THROWS_AS((void)build_ratio_history(bad), NonPositiveStep);
}

TEST_CASE("ssp coefficient of explicit coefficient pairs") {
    const double a1[] = {0.25, 0.0, 0.75};
    const double b1[] = {0.0, 0.0, 1.5};
    CHECK(ssp_coefficient(a1, b1).value() == doctest::Approx(0.5).epsilon(1e-15));

    const double a2[] = {-0.1, 1.1};
    const double b2[] = {0.0, 1.0};
    CHECK(ssp_coefficient(a2, b2).value() == 0.0);

    const double a3[] = {1.0, 0.0};
    const double b3[] = {0.0, 0.0};
    CHECK(ssp_coefficient(a3, b3).is_unbounded());
}

TEST_CASE("sharp upper bound") {
    CHECK(upper_bound(4.0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(upper_bound(3.0, 3) == 0.0);
    CHECK(upper_bound(3.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("optimal second-order formulae") {
    SUBCASE("three steps, fixed step size") {
        const FormulaCoefficients f = make_second_order(RatioHistory::fixed_step(3));
        CHECK(f.alphas[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(f.alphas[1] == 0.0);
        CHECK(f.alphas[2] == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(f.betas[2] == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(f.ssp_coeff.value() == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("three steps, shrinking history") {
        const double steps[] = {1.0, 1.0, 2.0 / 3.0};
        const FormulaCoefficients f = make_second_order(build_ratio_history(steps));
        CHECK(f.alphas[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
        CHECK(f.alphas[2] == doctest::Approx(8.0 / 9.0).epsilon(1e-13));
        CHECK(f.betas[2] == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
        CHECK(f.ssp_coeff.value() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    }
    SUBCASE("four steps, fixed step size") {
        const FormulaCoefficients f = make_second_order(RatioHistory::fixed_step(4));
        CHECK(f.alphas[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
        CHECK(f.alphas[3] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
        CHECK(f.betas[3] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
        CHECK(f.ssp_coeff.value() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("infeasible when the window is too short") {
        const double steps[] = {0.001, 0.001, 1.0};
        CHECK_THROWS_AS((void)make_second_order(build_ratio_history(steps)), InfeasibleOrder);
    }
}

TEST_CASE("optimal third-order formulae") {
    SUBCASE("four steps, fixed step size") {
        const FormulaCoefficients f = make_third_order(RatioHistory::fixed_step(4));
        CHECK(f.alphas[3] == doctest::Approx(16.0 / 27.0).epsilon(1e-14));
        CHECK(f.betas[3] == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
        CHECK(f.alphas[0] == doctest::Approx(11.0 / 27.0).epsilon(1e-14));
        CHECK(f.betas[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
        CHECK(f.ssp_coeff.value() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK_FALSE(f.outside_optimal_window);
    }
    SUBCASE("five steps, fixed step size") {
        const FormulaCoefficients f = make_third_order(RatioHistory::fixed_step(5));
        CHECK(f.ssp_coeff.value() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(f.betas[4] == doctest::Approx(25.0 / 16.0).epsilon(1e-14));
        CHECK(f.betas[0] == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
        CHECK(f.alphas[4] == doctest::Approx(25.0 / 32.0).epsilon(1e-14));
        CHECK(f.alphas[0] == doctest::Approx(7.0 / 32.0).epsilon(1e-14));
    }
    SUBCASE("infeasible at the order boundary") {
        const RatioHistory rh =
            RatioHistory::from_omegas({2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0});
        REQUIRE(rh.Omega_km1() <= 2.0);
        CHECK_THROWS_AS((void)make_third_order(rh), InfeasibleOrder);
    }
    SUBCASE("beyond the optimality window the secondary branch applies") {
        const RatioHistory rh = RatioHistory::from_omegas({2.0, 2.0, 2.0, 1.0});
        REQUIRE(rh.Omega_km1() == 6.0);
        const FormulaCoefficients f = make_third_order(rh);
        CHECK(f.outside_optimal_window);
        CHECK(f.ssp_coeff.value() == doctest::Approx(20.0 / 42.0).epsilon(1e-13));
        // still third order, and the catalogue minimum exceeds this branch value
        const auto res = verify_order(f, rh, 3);
        for (double r : res)
            CHECK(std::abs(r) <= 1e-12 * std::max(1.0, std::pow(rh.Omega_k(), 3)));
        const ThirdOrderCertificate cert = third_order_certificate(rh);
        CHECK(cert.optimal_C > f.ssp_coeff.value());
    }
}

TEST_CASE("cubic catalogue roots") {
    SUBCASE("existing roots match the bisection oracle") {
        CHECK(cubic_root(6.0, 5.0) ==
              doctest::Approx(cubic_root_oracle(6.0, 5.0)).epsilon(1e-12));
        CHECK(cubic_root(6.0, 5.0) == doctest::Approx(0.582821643142641).epsilon(1e-12));
        CHECK(cubic_root(3.0, 2.0) ==
              doctest::Approx(cubic_root_oracle(3.0, 2.0)).epsilon(1e-12));
        CHECK(cubic_root(3.0, 2.0) == doctest::Approx(0.8598848611904084).epsilon(1e-12));
    }
    SUBCASE("no admissible root yields infinity") {
        const double dj = 10.0, dj1 = 5.5;
        REQUIRE(dj1 * dj1 - (dj + 1.0) * dj1 + 3.0 * dj <= 0.0);
        REQUIRE(dj >= 5.0 + 2.0 * std::sqrt(6.0));
        CHECK(std::isinf(cubic_root(dj, dj1)));
    }
    SUBCASE("ordering precondition") {
        CHECK_THROWS_AS((void)cubic_root(2.0, 3.0), DomainError);
        CHECK_THROWS_AS((void)cubic_root(3.0, 0.5), DomainError);
    }
}

TEST_CASE("third-order optimality certificate") {
    SUBCASE("four steps, fixed step size") {
        const ThirdOrderCertificate cert = third_order_certificate(RatioHistory::fixed_step(4));
        CHECK(cert.optimal_C == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        REQUIRE(cert.argmin_indices == std::vector<int>{0});
        REQUIRE(cert.support.size() == 3);
        CHECK(cert.support[0] == CoeffName{CoeffKind::Delta, 0});
        CHECK(cert.support[1] == CoeffName{CoeffKind::Beta, 0});
        CHECK(cert.support[2] == CoeffName{CoeffKind::Beta, 3});
    }
    SUBCASE("five-step example with a cubic-root minimum") {
        const RatioHistory rh = RatioHistory::from_omegas(
            {1.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 1.0});
        REQUIRE(rh.Omega_k() == doctest::Approx(6.0).epsilon(1e-14));
        const ThirdOrderCertificate cert = third_order_certificate(rh);
        REQUIRE(cert.argmin_indices.size() == 1);
        CHECK(cert.argmin_indices[0] == 5); // the first cubic entry r_{k+0}
        CHECK(cert.optimal_C == doctest::Approx(0.582821643142641).epsilon(1e-10));
        REQUIRE(cert.support.size() == 3);
        CHECK(cert.support[0] == CoeffName{CoeffKind::Beta, 0});
        CHECK(cert.support[1] == CoeffName{CoeffKind::Beta, 1});
        CHECK(cert.support[2] == CoeffName{CoeffKind::Beta, 4});
    }
    SUBCASE("infeasible at Omega_k = 3") {
        const RatioHistory rh = RatioHistory::from_omegas({1.0, 0.5, 0.5, 1.0});
        REQUIRE(rh.Omega_k() == 3.0);
        CHECK_THROWS_AS((void)third_order_certificate(rh), InfeasibleOrder);
    }
}

TEST_CASE("order-condition residuals") {
    SUBCASE("constructed formulae satisfy their order conditions") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            for (int k : {3, 4, 5, 6}) {
                const RatioHistory rh = testing::random_ratios(k, rng);
                if (rh.Omega_k() > 2.0) {
                    const auto res = verify_order(make_second_order(rh), rh, 2);
                    for (double r : res)
                        CHECK(std::abs(r) <= 1e-12 * std::max(1.0, rh.Omega_k() * rh.Omega_k()));
                }
            }
            for (int k : {4, 5}) {
                const RatioHistory rh = testing::random_ratios(k, rng);
                if (rh.Omega_km1() > 2.0) {
                    const auto res = verify_order(make_third_order(rh), rh, 3);
                    for (double r : res)
                        CHECK(std::abs(r) <=
                              1e-12 * std::max(1.0, std::pow(rh.Omega_k(), 3)));
                }
            }
        }
    }
    SUBCASE("perturbed coefficients are detected") {
        const RatioHistory rh = RatioHistory::fixed_step(4);
        FormulaCoefficients f = make_third_order(rh);
        f.betas[0] += 1e-3;
        auto res = verify_order(f, rh, 3);
        double worst = 0.0;
        for (double r : res)
            worst = std::max(worst, std::abs(r));
        CHECK(worst >= 1e-4);

        f = make_third_order(rh);
        f.betas[3] += 1e-3;
        res = verify_order(f, rh, 3);
        CHECK(std::abs(res[3]) >= 1e-4); // the cubic condition reacts to beta_{k-1}
    }
    SUBCASE("forward Euler as a one-step formula") {
        FormulaCoefficients fe;
        fe.k = 1;
        fe.order = 1;
        fe.alphas = {1.0};
        fe.betas = {1.0};
        const RatioHistory rh = RatioHistory::fixed_step(1);
        const auto res = verify_order(fe, rh, 1);
        CHECK(res[0] == 0.0);
        CHECK(res[1] == 0.0);
    }
}

TEST_CASE("closed-form coefficients agree with the generic definition") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        for (int k : {3, 4, 5, 6}) {
            const RatioHistory rh = testing::random_ratios(k, rng, 0.3, 3.0);
            if (rh.Omega_k() <= 2.0)
                continue;
            const FormulaCoefficients f = make_second_order(rh);
            CHECK(std::abs(ssp_coefficient(f.alphas, f.betas).value() - f.ssp_coeff.value()) <=
                  1e-13);
            CHECK(f.ssp_coeff.value() <= upper_bound(rh.Omega_k(), 2) + 1e-13);
        }
        for (int k : {4, 5}) {
            const RatioHistory rh = testing::random_ratios(k, rng, 0.3, 3.0);
            if (rh.Omega_km1() <= 2.0)
                continue;
            const FormulaCoefficients f = make_third_order(rh);
            CHECK(std::abs(ssp_coefficient(f.alphas, f.betas).value() - f.ssp_coeff.value()) <=
                  1e-13);
            CHECK(f.ssp_coeff.value() <= upper_bound(rh.Omega_k(), 3) + 1e-13);
        }
    }
}

TEST_CASE("coefficient bounds of the convergence lemma") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        for (int k : {3, 4, 5, 6}) {
            const RatioHistory rh = testing::random_ratios(k, rng, 0.05, 20.0);
            if (rh.Omega_km1() <= 1.0)
                continue;
            const FormulaCoefficients f = make_second_order(rh);
            CHECK(f.betas[static_cast<size_t>(k) - 1] < 2.0);
        }
        for (int k : {4, 5}) {
            const RatioHistory rh = testing::random_ratios(k, rng, 0.05, 20.0);
            if (rh.Omega_km1() <= 2.0)
                continue;
            const FormulaCoefficients f = make_third_order(rh);
            CHECK(f.betas[static_cast<size_t>(k) - 1] < 9.0 / 4.0);
            CHECK(f.betas[0] < 3.0 / 4.0);
        }
    }
}

TEST_CASE("certificate matches the bisection-plus-enumeration oracle") {
    std::mt19937 rng(101);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 4 + static_cast<int>(rng() % 3); // 4, 5, 6
        const RatioHistory rh = testing::random_ratios(k, rng);
        if (rh.Omega_k() <= 3.0) {
            CHECK_THROWS_AS((void)third_order_certificate(rh), InfeasibleOrder);
            continue;
        }
        const ThirdOrderCertificate cert = third_order_certificate(rh);
        const double oracle = testing::oracle_optimal_c3(rh);
        CHECK(std::abs(cert.optimal_C - oracle) <= 1e-8);
        ++compared;
    }
    CHECK(compared >= 20);
}

TEST_CASE("formula reconstruction from a certificate support") {
    std::mt19937 rng(57);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 4 + static_cast<int>(rng() % 2);
        const RatioHistory rh = testing::random_ratios(k, rng);
        if (rh.Omega_k() <= 3.0)
            continue;
        const ThirdOrderCertificate cert = third_order_certificate(rh);
        if (cert.support.empty() || cert.support.size() > 3)
            continue;
        const FormulaCoefficients f = formula_from_support(rh, cert.optimal_C, cert.support);
        const SspCoeff c = ssp_coefficient(f.alphas, f.betas);
        REQUIRE_FALSE(c.is_unbounded());
        CHECK(c.value() == doctest::Approx(cert.optimal_C).epsilon(1e-8));
        for (double a : f.alphas)
            CHECK(a >= -1e-12);
        for (double b : f.betas)
            CHECK(b >= -1e-12);
    }
}

TEST_CASE("zero-stability witness: convex combinations stay bounded") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 3 + static_cast<int>(rng() % 4);
        std::vector<double> u(static_cast<size_t>(k));
        double start_max = 0.0;
        for (double& v : u) {
            v = unif(rng);
            start_max = std::max(start_max, std::abs(v));
        }
        double running_max = start_max;
        std::vector<double> h(static_cast<size_t>(k), 1.0);
        std::uniform_real_distribution<double> step(0.5, 2.0);
        for (int n = 0; n < 200; ++n) {
            h.push_back(step(rng));
            h.erase(h.begin());
            const RatioHistory rh = build_ratio_history(h);
            if (rh.Omega_k() <= 2.0)
                continue;
            const FormulaCoefficients f = make_second_order(rh);
            double next = 0.0;
            for (int j = 0; j < k; ++j)
                next += f.alphas[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
            u.erase(u.begin());
            u.push_back(next);
            running_max = std::max(running_max, std::abs(next));
        }
        CHECK(running_max <= start_max * (1.0 + 1e-12));
    }
}
