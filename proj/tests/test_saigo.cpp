#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracpois/errors.hpp"
#include "fracpois/saigo.hpp"

using namespace fracpois;

namespace {

// mpmath references: tests/oracles/compute_oracles.py.
constexpr double lemma_05_m03_02 = 1.0867594312844264;
constexpr double quad_07_m02_m04_rho13_t17 = 1.4058482792845594;
constexpr double rgamma_one_and_half = 1.1283791670955126;
constexpr double semigroup_lhs = 0.92956518819776178;
constexpr double semigroup_rhs = 0.96762148464999281;
constexpr double c1_08_m05_01 = 0.92903627852494836;
constexpr double c5_08_m05_01 = 0.31660610916071957;

double rel(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST(SaigoIntegralPower, RiemannLiouvilleCase) {
    for (double gamma : {-0.3, 0.0, 0.9}) {
        const PowerTerm t = saigo_integral_power({0.5, -0.5, gamma}, 1.0);
        EXPECT_NEAR(t.coeff, rgamma_one_and_half, 1e-14);
        EXPECT_NEAR(t.exponent, 0.5, 1e-15);
    }
}

TEST(SaigoIntegralPower, GeneralTuple) {
    const PowerTerm t = saigo_integral_power({0.5, -0.3, 0.2}, 1.0);
    EXPECT_NEAR(t.coeff, lemma_05_m03_02, 1e-14);
    EXPECT_NEAR(t.exponent, 0.3, 1e-15);
}

TEST(SaigoIntegralPower, ErdelyiKoberCase) {
    for (double alpha : {0.3, 0.8}) {
        for (double gamma : {0.0, 0.4}) {
            const PowerTerm t = saigo_integral_power({alpha, 0.0, gamma}, 1.0);
            EXPECT_NEAR(t.coeff, std::tgamma(1.0 + gamma) / std::tgamma(1.0 + alpha + gamma), 1e-14);
            EXPECT_EQ(t.exponent, 0.0);
        }
    }
}

TEST(SaigoIntegralPower, ReducesToRiemannLiouville) {
    for (double alpha : {0.2, 0.5, 0.9, 1.0}) {
        for (double rho : {0.3, 1.0, 1.7, 4.2, 12.5}) {
            const PowerTerm saigo = saigo_integral_power({alpha, -alpha, 0.37}, rho);
            const PowerSeries rl = rl_integrate(PowerSeries::monomial(1.0, rho - 1.0), alpha);
            EXPECT_NEAR(saigo.coeff, rl.terms()[0].coeff, 1e-12 * rl.terms()[0].coeff) << alpha << ' ' << rho;
            EXPECT_NEAR(saigo.exponent, rl.terms()[0].exponent, 1e-14);
        }
    }
}

TEST(SaigoIntegralPower, DomainChecks) {
    EXPECT_THROW(saigo_integral_power({0.5, -0.3, 0.2}, 0.0), DomainError);
    EXPECT_THROW(saigo_integral_power({0.5, 1.0, 0.2}, 0.7), DomainError);  // rho <= beta - gamma
    EXPECT_THROW(saigo_integral_power({0.0, -0.3, 0.2}, 1.0), DomainError);
}

TEST(SaigoIntegral, SeriesIsTermwise) {
    const SaigoParams p{0.6, -0.4, 0.3};
    const PowerSeries s({{2.0, 0.0}, {-1.0, 0.5}});
    const PowerSeries image = saigo_integral(s, p);
    ASSERT_EQ(image.size(), 2u);
    const PowerTerm a = saigo_integral_power(p, 1.0);
    const PowerTerm b = saigo_integral_power(p, 1.5);
    EXPECT_DOUBLE_EQ(image.coefficient_at(a.exponent), 2.0 * a.coeff);
    EXPECT_DOUBLE_EQ(image.coefficient_at(b.exponent), -b.coeff);
}

TEST(SaigoDerivative, ConstantsVanish) {
    const PowerTerm t = saigo_caputo_derivative_power({0.7, -0.5, 0.2}, 0.0);
    EXPECT_EQ(t.coeff, 0.0);
    EXPECT_TRUE(saigo_caputo_derivative(PowerSeries::constant(3.0), {0.7, -0.5, 0.2}).empty());
}

TEST(SaigoDerivative, CaputoCase) {
    for (double alpha : {0.3, 0.7, 1.0}) {
        for (double rho : {0.5, 1.0, 2.3}) {
            const PowerTerm t = saigo_caputo_derivative_power({alpha, -alpha, 0.25}, rho);
            EXPECT_NEAR(t.coeff, std::tgamma(rho + 1.0) / std::tgamma(rho - alpha + 1.0),
                        1e-13 * std::tgamma(rho + 1.0))
                << alpha << ' ' << rho;
            EXPECT_NEAR(t.exponent, rho - alpha, 1e-14);
        }
    }
}

TEST(SaigoDerivative, OrdinaryCase) {
    for (double rho : {0.5, 1.0, 3.0}) {
        const PowerTerm t = saigo_caputo_derivative_power({1.0, -1.0, 0.0}, rho);
        EXPECT_NEAR(t.coeff, rho, 1e-14);
        EXPECT_NEAR(t.exponent, rho - 1.0, 1e-15);
    }
}

TEST(SaigoDerivative, RejectsHigherOrders) {
    EXPECT_THROW(saigo_caputo_derivative_power({1.5, -0.5, 0.0}, 1.0), DomainError);
    EXPECT_THROW(saigo_caputo_derivative_power({0.0, -0.5, 0.0}, 1.0), DomainError);
    EXPECT_THROW(saigo_caputo_derivative_power({0.5, -2.0, 0.0}, 0.5), DomainError);
}

TEST(SaigoQuadrature, RiemannLiouvilleCase) {
    EXPECT_NEAR(saigo_integral_quadrature({0.5, -0.5, 0.0}, 1.0, 1.0), rgamma_one_and_half, 1e-8);
    EXPECT_NEAR(saigo_integral_quadrature({1.0, -1.0, 0.0}, 1.0, 2.0), 2.0, 1e-9);
}

TEST(SaigoQuadrature, MatchesLemma) {
    EXPECT_LT(rel(saigo_integral_quadrature({0.5, -0.3, 0.2}, 1.0, 1.0), lemma_05_m03_02), 1e-8);
    EXPECT_LT(rel(saigo_integral_quadrature({0.7, -0.2, -0.4}, 1.3, 1.7), quad_07_m02_m04_rho13_t17), 1e-8);
    const PowerTerm t = saigo_integral_power({0.7, -0.2, -0.4}, 1.3);
    EXPECT_LT(rel(t.coeff * std::pow(1.7, t.exponent), quad_07_m02_m04_rho13_t17), 1e-13);
}

TEST(SaigoQuadrature, IntegerConnectionExponent) {
    // c - a - b = gamma - beta = 1 exercises the shifted kernel.
    const SaigoParams p{0.6, -0.5, 0.5};
    const PowerTerm t = saigo_integral_power(p, 1.2);
    EXPECT_LT(rel(saigo_integral_quadrature(p, 1.2, 1.3), t.coeff * std::pow(1.3, t.exponent)), 1e-6);
}

TEST(SaigoQuadrature, DomainChecks) {
    EXPECT_THROW(saigo_integral_quadrature({0.5, -0.3, 0.2}, 1.0, 0.0), DomainError);
    EXPECT_THROW(saigo_integral_quadrature({0.5, 1.0, 0.2}, 0.5, 1.0), DomainError);
}

TEST(Semigroup, RiemannLiouvilleCommutes) {
    const SemigroupComparison same = semigroup_counterexample({1.0, -1.0, 0.0}, {1.0, -1.0, 0.0}, 1.0);
    EXPECT_FALSE(same.differ);
    EXPECT_NEAR(same.lhs, 0.5, 1e-15);
    EXPECT_NEAR(same.exponent, 2.0, 1e-15);

    const SemigroupComparison rl = semigroup_counterexample({0.4, -0.4, 0.7}, {0.3, -0.3, -0.2}, 1.0);
    EXPECT_FALSE(rl.differ);
    const PowerSeries direct = rl_integrate(PowerSeries::constant(1.0), 0.7);
    EXPECT_NEAR(rl.lhs, direct.terms()[0].coeff, 1e-13);
}

TEST(Semigroup, DocumentedCounterexample) {
    const SemigroupComparison c = semigroup_counterexample({0.5, -0.2, 0.3}, {0.7, -0.4, 0.1}, 1.0);
    EXPECT_TRUE(c.differ);
    EXPECT_NEAR(c.lhs, semigroup_lhs, 1e-14);
    EXPECT_NEAR(c.rhs, semigroup_rhs, 1e-14);
    EXPECT_GT(c.relative_gap, 1e-3);
    // t^0 -> t^0.4 -> t^0.6.
    EXPECT_NEAR(c.exponent, 0.6, 1e-14);
}

TEST(Semigroup, PreconditionEnforced) {
    EXPECT_THROW(semigroup_counterexample({0.5, 1.0, 0.0}, {0.5, 0.5, 0.0}, 1.0), DomainError);
}

TEST(Semigroup, CompositionLawHolds) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(0.1, 1.5);
    std::uniform_real_distribution<double> b(-1.0, 0.5);
    std::uniform_real_distribution<double> g(-0.3, 1.0);
    for (int i = 0; i < 40; ++i) {
        const SaigoParams outer{a(rng), b(rng), g(rng)};
        const double eta = a(rng);
        const double delta = b(rng);
        const double rho = 2.5;
        EXPECT_LT(saigo_semigroup_residual(outer, eta, delta, rho), 1e-12);
    }
}

TEST(Composition, Examples) {
    EXPECT_LE(composition_check({1.0, -1.0, 0.0}, 1.0, 1.0), 1e-15);
    EXPECT_LE(composition_check({0.6, -0.6, 0.0}, 2.0, 1.5), 1e-10 * std::pow(1.5, 2.0));
    EXPECT_LE(composition_check({0.6, -0.4, 0.3}, 1.5, 0.8), 1e-10 * std::pow(0.8, 1.5));
    EXPECT_THROW(composition_check({1.2, -0.4, 0.3}, 1.5, 0.8), DomainError);
}

TEST(Ck, Examples) {
    const SaigoParams p{0.8, -0.5, 0.1};
    const auto c = ck_coefficients(p, 5);
    ASSERT_EQ(c.size(), 6u);
    EXPECT_EQ(c[0], 1.0);
    EXPECT_NEAR(c[1], c1_08_m05_01, 1e-15);
    EXPECT_NEAR(c[1], std::tgamma(1.6) / std::tgamma(1.9), 1e-15);
    EXPECT_NEAR(c[5], c5_08_m05_01, 1e-14);
    for (double v : c) {
        EXPECT_GT(v, 0.0);
    }
}

TEST(Ck, UnitWhenBetaIsMinusAlpha) {
    for (double alpha : {0.1, 0.3, 0.7, 1.0}) {
        for (double v : ck_coefficients({alpha, -alpha, 0.45}, 200)) {
            EXPECT_EQ(v, 1.0) << alpha;
        }
    }
}

TEST(Ck, DomainErrors) {
    EXPECT_THROW(ck_coefficients({0.8, -0.5, -2.0}, 3), DomainError);
    EXPECT_THROW(ck_coefficients({0.8, 0.5, 0.0}, 3), DomainError);
    EXPECT_THROW(ck_coefficients({0.8, -0.5, 0.0}, -1), DomainError);
}
