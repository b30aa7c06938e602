#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coprime/asymptotics.hpp"

using namespace coprime;

namespace {

// MPFR's correctly rounded Gamma, used as an independent reference.
double mpfr_gamma_ref(double x) {
    BigFloat v(x, 160);
    mpfr_gamma(v.raw(), v.raw(), MPFR_RNDN);
    return v.to_double();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(Gamma, KnownValues) {
    EXPECT_NEAR(gamma_real(1.0), 1.0, 1e-14);
    EXPECT_NEAR(gamma_real(2.0), 1.0, 1e-14);
    EXPECT_LE(rel_err(gamma_real(0.5), std::sqrt(std::numbers::pi)), 1e-13);
    // Gamma(1/3) = 2.678938534707747633... (50-digit reference)
    EXPECT_LE(rel_err(gamma_real(1.0 / 3.0), 2.6789385347077476337), 1e-12);
}

TEST(Gamma, MatchesTwoReferencesOnGrid) {
    for (int i = 1; i <= 2000; ++i) {
        const double x = i / 1000.0;
        ASSERT_LE(rel_err(gamma_real(x), mpfr_gamma_ref(x)), 1e-12) << x;
        ASSERT_LE(rel_err(gamma_real(x), std::tgamma(x)), 1e-12) << x;
    }
}

TEST(Gamma, Domain) {
    EXPECT_THROW(gamma_real(0.0), DomainError);
    EXPECT_THROW(gamma_real(-0.5), DomainError);
    EXPECT_THROW(gamma_real(2.5), DomainError);
}

TEST(KConstant, Values) {
    EXPECT_LE(rel_err(k_constant(2), 1.0 / std::sqrt(std::numbers::pi)), 1e-13);
    EXPECT_LE(rel_err(k_constant(3), 1.0 / mpfr_gamma_ref(2.0 / 3.0)), 1e-12);
    EXPECT_LE(rel_err(k_constant(3), 0.73848811162164831294), 1e-12);
    EXPECT_THROW(k_constant(1), DomainError);
}

TEST(KConstant, BracketAndApproachToOne) {
    const double lower = std::numbers::inv_sqrtpi;
    double prev = 0.0;
    for (std::int64_t m = 2; m <= 10000; ++m) {
        const double k = k_constant(m);
        ASSERT_GE(k, lower) << m;
        ASSERT_LT(k, 1.0) << m;
        ASSERT_GT(k, prev) << m;
        prev = k;
    }
    EXPECT_GT(k_constant(1000), 0.999);
}

TEST(Kappa, FrozenValues) {
    // references computed independently at 30 digits
    EXPECT_LE(rel_err(lambda(make_modulus(2)), 0.56418958354775628695), 1e-12);
    EXPECT_LE(rel_err(kappa(make_modulus(6)), 0.56480793785288099010), 1e-12);
    EXPECT_LE(rel_err(lambda(make_modulus(6)), 0.17105402247792089973), 1e-12);
    EXPECT_LE(rel_err(lambda(make_modulus(15)), 0.28202521251130701120), 1e-12);
    EXPECT_LE(rel_err(lambda(make_modulus(30)), 0.037799739906140405138), 1e-12);
    EXPECT_EQ(kappa(make_modulus(1)), 1.0);
    EXPECT_EQ(lambda(make_modulus(1)), 1.0);
}

TEST(Kappa, SixClosedForm) {
    const double expected = std::sqrt(2.0) * std::cbrt(3.0) * std::pow(6.0, -1.0 / 6.0) / gamma_real(1.0 / 3.0);
    EXPECT_LE(rel_err(kappa(make_modulus(6)), expected), 1e-14);
    EXPECT_LE(rel_err(lambda(make_modulus(6)), expected / std::pow(6.0, 2.0 / 3.0)), 1e-14);
}

TEST(Kappa, NonSquareFreeDivisorsAgreeWithRadical) {
    for (std::int64_t m : {4, 12, 18, 36, 60, 72, 100}) {
        const auto mod = make_modulus(m);
        const auto rad = make_modulus(mod.radical);
        EXPECT_DOUBLE_EQ(kappa(mod), kappa(rad)) << m;
        EXPECT_DOUBLE_EQ(lambda(mod), lambda(rad)) << m;
    }
}

TEST(Kappa, PrimeLambdaIsK) {
    for (std::int64_t p = 2; p <= 100; ++p)
        if (is_prime(p)) EXPECT_LE(std::abs(lambda(make_modulus(p)) - k_constant(p)), 1e-10) << p;
}

TEST(FValue, Examples) {
    EXPECT_EQ(f_value(make_modulus(1), 17, 1.0), 1.0);
    EXPECT_NEAR(f_value(make_modulus(2), 4, 0.375), 0.375 * std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(f_value(make_modulus(6), 6, 29.0 / 144.0), 29.0 / 144.0, 1e-16);
    const BigFloat hp = f_value(make_modulus(2), 4, BigFloat(Rational(3, 8), 128));
    EXPECT_NEAR(hp.to_double(), 0.53033008588991, 1e-13);
    EXPECT_THROW(f_value(make_modulus(2), 0, 1.0), DomainError);
}

TEST(PowerBounds, ModTwoExact) {
    const auto mod = make_modulus(2);
    const auto rep = check_theorem1(rho_series(mod, 1000), constant_C(mod));
    EXPECT_TRUE(rep.all_ok());
    EXPECT_TRUE(rep.exact);
    EXPECT_GE(rep.worst_margin, 0.0);
    EXPECT_EQ(rep.checks(), 1000 + 3 * 999);
    // n in [2, 3] meets the lower bound with equality
    EXPECT_EQ(rep.worst_lower, 0.0);
}

TEST(PowerBounds, ModOneIsEquality) {
    const auto mod = make_modulus(1);
    const auto rep = check_theorem1(rho_series(mod, 50), constant_C(mod));
    EXPECT_TRUE(rep.all_ok());
    EXPECT_EQ(rep.worst_margin, 0.0);
}

TEST(PowerBounds, ModThirtyFloat) {
    const auto mod = make_modulus(30);
    const auto series = rho_series_float(mod, 10000, 128);
    const auto rep = check_theorem1(series, constant_C(mod));
    EXPECT_FALSE(rep.exact);
    EXPECT_TRUE(rep.all_ok());
    // rho(1) = 1 meets the upper bound and the minimiser in [m, 2m) meets the lower one
    EXPECT_EQ(rep.worst_margin, 0.0);
    const auto tail = check_theorem1(series, constant_C(mod), 60, 10000);
    EXPECT_TRUE(tail.all_ok());
    EXPECT_GT(tail.worst_margin, std::ldexp(1.0, -64));
}

TEST(PowerBounds, ReportsViolations) {
    const auto mod = make_modulus(6);
    auto values = rho_series_exact(mod, 40).exact_values();
    values[20] = 1;                 // above ceil(20/6)^y
    values[30] = Rational(1, 1000); // below C floor(30/6)^y
    const RhoSeries broken(mod, values);
    const auto rep = check_theorem1(broken, constant_C(mod));
    EXPECT_FALSE(rep.all_ok());
    ASSERT_GE(rep.violations.size(), 2u);
    EXPECT_EQ(rep.upper_ok[20 - 1], Verdict::Fail);
    EXPECT_EQ(rep.lower_ok[30 - 1], Verdict::Fail);
    EXPECT_LT(rep.worst_margin, 0.0);
    EXPECT_EQ(rep.violations.front().n, 20);
    EXPECT_EQ(rep.violations.front().bound, "upper");
}

TEST(PowerBounds, RangeValidation) {
    const auto mod = make_modulus(6);
    const auto s = rho_series(mod, 40);
    EXPECT_THROW(check_theorem1(s, constant_C(mod), 0, 10), DomainError);
    EXPECT_THROW(check_theorem1(s, constant_C(mod), 1, 41), DomainError);
    const auto part = check_theorem1(s, constant_C(mod), 10, 20);
    EXPECT_EQ(part.upper_ok.size(), 11u);
    EXPECT_EQ(part.lower_ok.front(), Verdict::Pass);
    const auto early = check_theorem1(s, constant_C(mod), 1, 5);
    EXPECT_EQ(early.lower_ok.front(), Verdict::NotApplicable);
}

TEST(BinomialSandwich, Examples) {
    const auto t = check_lemma22(-0.5, 2.0);
    EXPECT_DOUBLE_EQ(t.lower, 0.6875);
    EXPECT_NEAR(t.middle, std::sqrt(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(t.upper, 0.75);
    EXPECT_TRUE(t.chain_holds());
    EXPECT_TRUE(check_lemma22(-1e-6, 2.0).chain_holds(1e-12));
    EXPECT_TRUE(check_lemma22(-2.0 / 3.0, 6.0).chain_holds());
    EXPECT_THROW(check_lemma22(0.0, 2.0), DomainError);
    EXPECT_THROW(check_lemma22(-1.0, 2.0), DomainError);
    EXPECT_THROW(check_lemma22(-0.5, 1.5), DomainError);
}

TEST(BinomialSandwich, Grid) {
    for (int i = 1; i <= 200; ++i) {
        const double y = -1.0 + i / 201.0;
        for (int j = 0; j < 200; ++j) {
            const double a = 2.0 + 98.0 * j / 199.0;
            ASSERT_TRUE(check_lemma22(y, a).chain_holds(1e-12)) << y << " " << a;
        }
    }
}

TEST(Y0, UpperExamples) {
    auto c = check_Y0_upper(2, 0, 2, 6, 2);
    EXPECT_TRUE(c.identity_holds);
    EXPECT_EQ(c.factored, 0);
    c = check_Y0_upper(3, 1, 1, 6, 2);
    EXPECT_TRUE(c.identity_holds);
    EXPECT_EQ(c.factored, 0);
    c = check_Y0_upper(2, 5, 0, 6, 2);
    EXPECT_TRUE(c.identity_holds);
    EXPECT_EQ(c.factored, Rational(2, 7));
    EXPECT_THROW(check_Y0_upper(1, 0, 0, 6, 2), DomainError);
    EXPECT_THROW(check_Y0_upper(2, 12, 0, 6, 2), DomainError);
}

TEST(Y0, LowerExamples) {
    auto c = check_Y0_lower(2, 0, 0, 6, 2);
    EXPECT_TRUE(c.identity_holds);
    EXPECT_EQ(c.factored, Rational(1, 27));
    c = check_Y0_lower(2, 1, 1, 6, 2);
    EXPECT_TRUE(c.identity_holds);
    EXPECT_EQ(c.factored, Rational(4, 117));
    EXPECT_GT(c.factored, 0);
    c = check_Y0_lower(2, 0, 0, 1, 1);
    EXPECT_EQ(c.factored, 0);
    EXPECT_THROW(check_Y0_lower(1, 0, 0, 6, 2), DomainError);
}

TEST(Y0, RandomTuplesIdentityAndSign) {
    std::mt19937_64 rng(42);
    auto uni = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    int windowed_upper = 0, windowed_lower = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto a = uni(2, 100), m = uni(2, 30), phi = uni(1, m), b = uni(0, m - 1), x = uni(0, m);
        const auto up = check_Y0_upper(a, b, x, m, phi);
        ASSERT_TRUE(up.identity_holds);
        if (up.in_window) {
            ++windowed_upper;
            ASSERT_TRUE(up.nonnegative);
        }
        const auto lo = check_Y0_lower(a, b, x, m, phi);
        ASSERT_TRUE(lo.identity_holds);
        if (lo.in_window) {
            ++windowed_lower;
            ASSERT_TRUE(lo.nonnegative);
        }
    }
    EXPECT_GT(windowed_upper, 100);
    EXPECT_GT(windowed_lower, 100);
}

TEST(Y0, ActualModuliInsideWindow) {
    // Every (b, x_b) / (b, y_b) pair arising from a real square-free modulus.
    for (std::int64_t m = 2; m <= 30; ++m) {
        if (!is_square_free(m)) continue;
        const auto mod = make_modulus(m);
        for (std::int64_t a = 2; a <= 20; ++a)
            for (std::int64_t b = 0; b < m; ++b) {
                const auto up = check_Y0_upper(a, b, count_x(mod, b), m, mod.phi);
                ASSERT_TRUE(up.in_window && up.identity_holds && up.nonnegative) << m << " " << a << " " << b;
                const auto lo = check_Y0_lower(a, b, count_y(mod, b), m, mod.phi);
                ASSERT_TRUE(lo.in_window && lo.identity_holds && lo.nonnegative) << m << " " << a << " " << b;
            }
    }
}
