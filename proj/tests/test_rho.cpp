#include <gtest/gtest.h>

#include <thread>

#include "coprime/oracle.hpp"
#include "coprime/rho.hpp"

using namespace coprime;

namespace {

Rational oracle_rho_direct(int n, std::int64_t m) {
    Rational r(oracle::count_coprime_order_direct(n, m), factorial(static_cast<unsigned long>(n)));
    r.canonicalize();
    return r;
}

Rational oracle_rho_partitions(int n, std::int64_t m) {
    Rational r(oracle::count_coprime_order_partitions(n, m), factorial(static_cast<unsigned long>(n)));
    r.canonicalize();
    return r;
}

const std::vector<std::int64_t> kSquareFreeUpTo30 = {1, 2, 3, 5, 6, 7, 10, 11, 13, 14,
                                                     15, 17, 19, 21, 22, 23, 26, 29, 30};

}  // namespace

TEST(RhoSeries, ModTwoFirstValues) {
    const auto s = rho_series(make_modulus(2), 5);
    ASSERT_TRUE(s.is_exact());
    const std::vector<Rational> expected = {1, 1, Rational(1, 2), Rational(1, 2), Rational(3, 8), Rational(3, 8)};
    EXPECT_EQ(s.exact_values(), expected);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(s.exact(n), oracle_rho_direct(n, 2)) << n;
}

TEST(RhoSeries, SixSix) {
    const auto s = rho_series(make_modulus(6), 6);
    EXPECT_EQ(s.exact(6), Rational(29, 144));
    EXPECT_EQ(oracle_rho_direct(6, 6), Rational(29, 144));
}

TEST(RhoSeries, ModOneIsAllOnes) {
    const auto s = rho_series(make_modulus(1), 10);
    for (const auto& v : s.exact_values()) EXPECT_EQ(v, 1);
    const auto f = rho_series(make_modulus(1), 10, NumericConfig{}, Backend::Float);
    for (const auto& v : f.float_values()) EXPECT_EQ(v.to_double(), 1.0);
}

TEST(RhoSeries, InvariantsAndCountsAreIntegers) {
    for (auto m : kSquareFreeUpTo30) {
        const auto mod = make_modulus(m);
        const auto s = rho_series(mod, 120);
        const auto counts = count_series(mod, 120);
        BigInt fact = 1;
        for (std::int64_t n = 0; n <= 120; ++n) {
            if (n > 0) fact *= n;
            const Rational& v = s.exact(n);
            ASSERT_GT(v, 0);
            ASSERT_LE(v, 1);
            if (mod.radical > 1 && n < mod.smallest_prime()) ASSERT_EQ(v, 1) << m << " " << n;
            const Rational scaled = v * fact;
            ASSERT_EQ(scaled.get_den(), 1) << m << " " << n;
            ASSERT_EQ(scaled.get_num(), counts[static_cast<std::size_t>(n)]) << m << " " << n;
        }
    }
}

TEST(RhoSeries, IntegerCountsMethodMatchesRationalWindow) {
    for (std::int64_t m : {2, 6, 7, 30, 26}) {
        const auto mod = make_modulus(m);
        const auto a = rho_series_exact(mod, 400, ExactMethod::RationalWindow);
        const auto b = rho_series_exact(mod, 400, ExactMethod::IntegerCounts);
        EXPECT_EQ(a.exact_values(), b.exact_values()) << m;
    }
}

TEST(RhoSeries, BackendSelectionFollowsCutoff) {
    NumericConfig cfg;
    cfg.exact_cutoff = 50;
    EXPECT_TRUE(rho_series(make_modulus(6), 50, cfg).is_exact());
    const auto f = rho_series(make_modulus(6), 51, cfg);
    EXPECT_FALSE(f.is_exact());
    EXPECT_EQ(f.precision_bits(), 128);
    EXPECT_THROW(f.exact(3), std::logic_error);
}

TEST(RhoSeries, FloatAgreesWithExact) {
    for (long bits : {64L, 128L, 200L}) {
        for (std::int64_t m : {2, 6, 15, 30}) {
            const auto mod = make_modulus(m);
            const auto ex = rho_series_exact(mod, 600);
            const auto fl = rho_series_float(mod, 600, bits);
            const BigFloat tol = BigFloat::two_pow(10 - bits, 256);
            for (std::int64_t n = 0; n <= 600; ++n) {
                const BigFloat diff = (BigFloat(ex.exact(n), 512) - fl.approx(n, 512)).abs();
                ASSERT_TRUE(diff <= tol) << "m=" << m << " n=" << n << " bits=" << bits;
            }
        }
    }
}

TEST(RhoSeries, FloatIsBitReproducible) {
    const auto mod = make_modulus(30);
    const auto a = rho_series_float(mod, 2000, 128);
    const auto b = rho_series_float(mod, 2000, 128);
    for (std::int64_t n = 0; n <= 2000; ++n) ASSERT_TRUE(a.float_values()[n] == b.float_values()[n]);
}

TEST(RhoSeries, Errors) {
    const auto mod = make_modulus(6);
    EXPECT_THROW(rho_series(mod, -1), DomainError);
    NumericConfig bad;
    bad.float_precision_bits = 24;
    EXPECT_THROW(rho_series(mod, 10, bad), DomainError);
    bad = NumericConfig{};
    bad.exact_cutoff = -1;
    EXPECT_THROW(rho_series(mod, 10, bad), DomainError);
    EXPECT_THROW(rho_at(mod, -3), DomainError);
}

TEST(RhoAt, Examples) {
    EXPECT_EQ(std::get<Rational>(rho_at(make_modulus(2), 4)), Rational(3, 8));
    EXPECT_EQ(std::get<Rational>(rho_at(make_modulus(3), 2)), 1);
    const Rational r30 = std::get<Rational>(rho_at(make_modulus(30), 29));
    EXPECT_LT(r30, 1);
    EXPECT_EQ(r30, oracle_rho_partitions(29, 30));
}

TEST(RhoAt, MatchesSeriesInBothBackends) {
    const auto mod = make_modulus(15);
    const auto s = rho_series_exact(mod, 300);
    for (std::int64_t n : {0, 1, 14, 15, 16, 29, 30, 299, 300}) EXPECT_EQ(rho_at_exact(mod, n), s.exact(n)) << n;
    const auto f = rho_series_float(mod, 300, 128);
    EXPECT_TRUE(rho_at_float(mod, 300, 128) == f.float_values()[300]);
    NumericConfig cfg;
    cfg.exact_cutoff = 100;
    EXPECT_TRUE(std::holds_alternative<BigFloat>(rho_at(mod, 101, cfg)));
}

TEST(ClosedForm, PrimeExamples) {
    EXPECT_EQ(rho_prime_closed_form(2, 5), Rational(3, 8));
    EXPECT_EQ(rho_prime_closed_form(7, 6), 1);
    EXPECT_EQ(rho_prime_closed_form(3, 9), Rational(40, 81));
    EXPECT_EQ(rho_prime_closed_form(3, 9), oracle_rho_partitions(9, 3));
    EXPECT_THROW(rho_prime_closed_form(6, 9), DomainError);
    EXPECT_THROW(rho_prime_closed_form(1, 9), DomainError);
}

TEST(ClosedForm, MatchesEngineAndPlateau) {
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        const auto s = rho_series_exact(make_modulus(p), 800);
        for (std::int64_t n = 0; n <= 800; ++n) ASSERT_EQ(s.exact(n), rho_prime_closed_form(p, n)) << p << " " << n;
        for (std::int64_t a = 1; a * p + p - 1 <= 800; ++a)
            for (std::int64_t i = 1; i < p; ++i) ASSERT_EQ(s.exact(a * p), s.exact(a * p + i));
    }
}

TEST(PNotM, Examples) {
    EXPECT_EQ(p_not_m(make_modulus(6), 5), 1);
    EXPECT_EQ(p_not_m(make_modulus(2), 4), Rational(3, 8));
    EXPECT_EQ(p_not_m(make_modulus(6), 12), Rational(55, 72));
    EXPECT_EQ(p_not_m(make_modulus(12), 12), Rational(55, 72));
}

// At m = 1 every cycle length is divisible by m, so p_not_m vanishes for n >= 1.
TEST(PNotM, DominatesRho) {
    for (auto m : kSquareFreeUpTo30) {
        if (m == 1) continue;
        const auto mod = make_modulus(m);
        const auto s = rho_series_exact(mod, 400);
        for (std::int64_t n = 0; n <= 400; ++n) ASSERT_LE(s.exact(n), p_not_m(mod, n)) << m << " " << n;
    }
}

TEST(ConstantC, Values) {
    EXPECT_EQ(constant_C(make_modulus(1)), 1);
    EXPECT_EQ(constant_C(make_modulus(2)), Rational(1, 2));
    for (std::int64_t p = 2; p < 60; ++p)
        if (is_prime(p)) EXPECT_EQ(constant_C(make_modulus(p)), 1 - Rational(1, p)) << p;
}

TEST(ConstantC, SixIsTheWindowMinimumAndOracleBacked) {
    const auto mod = make_modulus(6);
    Rational best = 2;
    for (int n = 6; n <= 11; ++n) {
        const Rational v = oracle_rho_partitions(n, 6);
        EXPECT_EQ(v, rho_at_exact(mod, n)) << n;
        if (v < best) best = v;
    }
    EXPECT_EQ(constant_C(mod), best);
    EXPECT_LE(constant_C(mod), Rational(29, 144));
}

TEST(RhoSeries, RadicalReduction) {
    const auto s2 = rho_series_exact(make_modulus(2), 9);
    for (int n = 0; n <= 9; ++n) EXPECT_EQ(oracle_rho_direct(n, 4), s2.exact(n)) << n;
    const auto s6 = rho_series_exact(make_modulus(6), 40);
    const auto s36 = rho_series_exact(make_modulus(36), 40);
    EXPECT_EQ(s6.exact_values(), s36.exact_values());
}

TEST(RhoSeries, ConcurrentJobsMatchSequential) {
    const auto m6 = make_modulus(6), m30 = make_modulus(30);
    const auto seq6 = rho_series_float(m6, 3000, 128);
    const auto seq30 = rho_series_exact(m30, 300);
    std::optional<RhoSeries> par6, par30;
    std::thread t1([&] { par6 = rho_series_float(m6, 3000, 128); });
    std::thread t2([&] { par30 = rho_series_exact(m30, 300); });
    t1.join();
    t2.join();
    EXPECT_EQ(par30->exact_values(), seq30.exact_values());
    for (std::int64_t n = 0; n <= 3000; ++n) ASSERT_TRUE(par6->float_values()[n] == seq6.float_values()[n]);
}
