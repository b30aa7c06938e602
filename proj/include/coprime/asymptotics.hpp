#pragma once

// Asymptotic constants (k(m), kappa_m, lambda_m), the rescaled proportion
// f(n,m), and checkers for the two-sided power bound on rho together with the
// algebraic steps behind its inductive proof.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/bigfloat.hpp"
#include "coprime/errors.hpp"
#include "coprime/rho.hpp"

namespace coprime {

// ---------------------------------------------------------------------------
// Gamma function on (0, 2]
// ---------------------------------------------------------------------------

/// Lanczos approximation (g = 7, 9 terms), reflected for x < 1/2.
inline double gamma_real(double x) {
    if (!(x > 0.0 && x <= 2.0)) throw DomainError("gamma_real: argument must lie in (0, 2]");
    static constexpr double kG = 7.0;
    static constexpr std::array<double, 9> kCoef = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    constexpr double pi = std::numbers::pi;
    if (x < 0.5) return pi / (std::sin(pi * x) * gamma_real(1.0 - x));
    const double z = x - 1.0;
    double series = kCoef[0];
    for (std::size_t i = 1; i < kCoef.size(); ++i) series += kCoef[i] / (z + static_cast<double>(i));
    const double t = z + kG + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

/// k(m) = 1 / Gamma(1 - 1/m), the leading constant for prime m.
inline double k_constant(std::int64_t m) {
    if (m < 2) throw DomainError("k_constant: m must be >= 2");
    return 1.0 / gamma_real(1.0 - 1.0 / static_cast<double>(m));
}

struct KappaLambda {
    double kappa = 1.0;
    double lambda = 1.0;
};

/// kappa_m = Gamma(phi/m)^-1 prod_{d | m} d^(-mu(d)/d), and
/// lambda_m = kappa_m / r^(1 - phi/r) with r = rad(m), the limit of f(n, m).
inline KappaLambda kappa_lambda(const Modulus& mod) {
    if (mod.radical == 1) return {};  // exactly 1, not Gamma(1) up to rounding
    const double ratio = static_cast<double>(mod.phi) / static_cast<double>(mod.radical);
    double log_prod = 0.0;
    for (auto d : divisors(mod.m)) {
        const int mu = moebius(d);
        if (mu == 0 || d == 1) continue;
        log_prod -= mu * std::log(static_cast<double>(d)) / static_cast<double>(d);
    }
    KappaLambda out;
    out.kappa = std::exp(log_prod) / gamma_real(ratio);
    out.lambda = out.kappa / std::pow(static_cast<double>(mod.radical), 1.0 - ratio);
    return out;
}

inline double kappa(const Modulus& mod) { return kappa_lambda(mod).kappa; }
inline double lambda(const Modulus& mod) { return kappa_lambda(mod).lambda; }

// ---------------------------------------------------------------------------
// f(n, m) = rho(n, m) (n / m)^(1 - phi/m), m read as rad(m)
// ---------------------------------------------------------------------------

inline double f_value(const Modulus& mod, std::int64_t n, double rho_n) {
    if (n < 1) throw DomainError("f_value: n must be >= 1");
    const double e = -mod.y.get_d();
    return rho_n * std::pow(static_cast<double>(n) / static_cast<double>(mod.radical), e);
}

inline BigFloat f_value(const Modulus& mod, std::int64_t n, const BigFloat& rho_n) {
    if (n < 1) throw DomainError("f_value: n must be >= 1");
    const long bits = rho_n.precision();
    if (mod.radical == 1) return rho_n;
    return rho_n * rational_power(Rational(n, mod.radical), Rational(-mod.y), bits);
}

// ---------------------------------------------------------------------------
// Two-sided bound: C(m) floor(n/m)^y <= rho(n) <= ceil(n/m)^y
// ---------------------------------------------------------------------------

enum class Verdict : unsigned char { Pass, Fail, NotApplicable };

struct BoundViolation {
    std::int64_t n = 0;
    std::string bound;  // "upper", "lower", "smooth_upper", "smooth_lower"
    std::string slack;  // bound-side minus rho side; negative means violated
};

struct BoundsReport {
    Modulus modulus;
    std::int64_t n_lo = 0;
    std::int64_t n_hi = 0;
    bool exact = true;
    // index n - n_lo
    std::vector<Verdict> upper_ok, lower_ok, smooth_upper_ok, smooth_lower_ok;
    // minimum slack over the checked n; +inf when nothing was checked
    double worst_upper = std::numeric_limits<double>::infinity();
    double worst_lower = std::numeric_limits<double>::infinity();
    double worst_smooth_upper = std::numeric_limits<double>::infinity();
    double worst_smooth_lower = std::numeric_limits<double>::infinity();
    double worst_margin = std::numeric_limits<double>::infinity();
    std::int64_t exact_tiebreaks = 0;
    bool smooth_implied = true;  // every n passing the ceil/floor form also passes the smooth form
    std::vector<BoundViolation> violations;

    bool all_ok() const { return violations.empty() && smooth_implied; }
    std::int64_t checks() const {
        std::int64_t c = 0;
        for (const auto* v : {&upper_ok, &lower_ok, &smooth_upper_ok, &smooth_lower_ok})
            for (auto x : *v) c += x != Verdict::NotApplicable;
        return c;
    }
};

namespace detail {

struct SideResult {
    Verdict verdict = Verdict::NotApplicable;
    BigFloat slack{256};
};

// Exact series. `rho_below` selects rho <= coef * base^y (else >=); the slack
// is oriented so that a negative value is a violation.
inline SideResult exact_side(const Rational& rho, const Rational& coef, const Rational& base, const Rational& y,
                             bool rho_below, std::int64_t& tiebreaks) {
    const auto cmp = compare_to_power(rho, coef, base, y);
    if (cmp.used_exact) ++tiebreaks;
    SideResult r;
    r.slack = rho_below ? BigFloat(0L, 256) - cmp.difference : cmp.difference;
    const int s = rho_below ? -cmp.sign : cmp.sign;
    r.verdict = s >= 0 ? Verdict::Pass : Verdict::Fail;
    return r;
}

// Float series: a negative slack inside a 64-ulp band of the bound is
// attributed to rounding.
inline SideResult float_side(const BigFloat& rho, const Rational& coef, const Rational& base, const Rational& y,
                             bool rho_below) {
    const long bits = rho.precision();
    BigFloat bound(coef, bits);
    if (sgn(y) != 0) bound *= rational_power(base, y, bits);
    SideResult r;
    r.slack = rho_below ? bound - rho : rho - bound;
    BigFloat band = bound.ulp();
    band *= 64L;
    r.verdict = r.slack.sign() >= 0 || r.slack.abs() <= band ? Verdict::Pass : Verdict::Fail;
    return r;
}

}  // namespace detail

/// Checks the ceiling-form upper bound for every n >= 1 and the floor-form
/// lower bound (plus both smooth (n/m)^y forms) for every n >= m, over
/// [n_lo, n_hi] of the series. The modulus is read as its radical.
inline BoundsReport check_theorem1(const RhoSeries& series, const Rational& C, std::int64_t n_lo = 1,
                                   std::int64_t n_hi = -1) {
    const Modulus& mod = series.modulus();
    if (n_hi < 0) n_hi = series.n_max();
    if (n_lo < 1 || n_hi > series.n_max() || n_lo > n_hi)
        throw DomainError("check_theorem1: range [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) +
                          "] not covered by the series");
    const std::int64_t m = mod.radical;
    const Rational& y = mod.y;

    BoundsReport rep;
    rep.modulus = mod;
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    rep.exact = series.is_exact();
    const auto count = static_cast<std::size_t>(n_hi - n_lo + 1);
    rep.upper_ok.assign(count, Verdict::NotApplicable);
    rep.lower_ok = rep.smooth_upper_ok = rep.smooth_lower_ok = rep.upper_ok;

    auto record = [&](std::int64_t n, const char* name, const detail::SideResult& side,
                      std::vector<Verdict>& flags, double& worst) {
        flags[static_cast<std::size_t>(n - n_lo)] = side.verdict;
        const double slack = side.slack.to_double();
        if (slack < worst) worst = slack;
        if (side.verdict == Verdict::Fail) rep.violations.push_back({n, name, side.slack.to_string(40)});
    };

    const long bits = series.is_exact() ? 0 : series.precision_bits();
    const Rational one(1);
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const Rational ceil_q((n + m - 1) / m);
        const Rational floor_q(n / m);
        const Rational smooth(n, m);
        auto side = [&](const Rational& coef, const Rational& base, bool rho_below) {
            if (series.is_exact())
                return detail::exact_side(series.exact(n), coef, base, y, rho_below, rep.exact_tiebreaks);
            return detail::float_side(series.approx(n, bits), coef, base, y, rho_below);
        };
        record(n, "upper", side(one, ceil_q, true), rep.upper_ok, rep.worst_upper);
        if (n >= m) {
            record(n, "lower", side(C, floor_q, false), rep.lower_ok, rep.worst_lower);
            record(n, "smooth_upper", side(one, smooth, true), rep.smooth_upper_ok, rep.worst_smooth_upper);
            record(n, "smooth_lower", side(C, smooth, false), rep.smooth_lower_ok, rep.worst_smooth_lower);
            const auto i = static_cast<std::size_t>(n - n_lo);
            if (rep.upper_ok[i] == Verdict::Pass && rep.smooth_upper_ok[i] != Verdict::Pass) rep.smooth_implied = false;
            if (rep.lower_ok[i] == Verdict::Pass && rep.smooth_lower_ok[i] != Verdict::Pass) rep.smooth_implied = false;
        }
    }
    rep.worst_margin = std::min({rep.worst_upper, rep.worst_lower, rep.worst_smooth_upper, rep.worst_smooth_lower});
    return rep;
}

// ---------------------------------------------------------------------------
// Binomial-series sandwich for ((a-1)/a)^(y+1)
// ---------------------------------------------------------------------------

struct Lemma22Triple {
    double lower = 0;   // 1 - ((y+1)/a)(1 - y/a)
    double middle = 0;  // ((a-1)/a)^(y+1)
    double upper = 0;   // 1 - (y+1)/a

    /// 0 < lower <= middle < upper, the weak step allowed `slack` of rounding.
    bool chain_holds(double slack = 0.0) const {
        return lower > 0.0 && lower <= middle + slack && middle < upper;
    }
};

/// Valid for -1 < y < 0 and a >= 2. The proof expands (1 + x)^(y+1) with
/// x = -1/a and bounds the tail using x0 = -1/2.
inline Lemma22Triple check_lemma22(double y, double a) {
    if (!(y > -1.0 && y < 0.0)) throw DomainError("check_lemma22: y must lie in (-1, 0)");
    if (!(a >= 2.0)) throw DomainError("check_lemma22: a must be >= 2");
    Lemma22Triple t;
    t.lower = 1.0 - ((y + 1.0) / a) * (1.0 - y / a);
    t.middle = std::pow((a - 1.0) / a, y + 1.0);
    t.upper = 1.0 - (y + 1.0) / a;
    return t;
}

// ---------------------------------------------------------------------------
// Y0 factorisations from the inductive step, checked in exact arithmetic
// ---------------------------------------------------------------------------

struct Y0Check {
    Rational definitional;  // 1 - Y (upper branch) or Y - 1 (lower branch) from the unfactored Y
    Rational factored;
    bool identity_holds = false;
    bool in_window = false;    // the constraint window used in the proof applies
    bool nonnegative = false;  // factored >= 0
};

/// Upper branch, n = am - b:
///   Y  = (1 - phi/(am)) (1 - (b - a phi + a x_b)/((a-1)(am-b))) + x_b/(am-b)
///   Y0 = 1 - Y = (m - phi)(b + x_b - phi) / (m (a-1)(am - b))
inline Y0Check check_Y0_upper(std::int64_t a, std::int64_t b, std::int64_t x_b, std::int64_t m, std::int64_t phi) {
    if (a == 1 || a * m == b || m == 0 || a == 0)
        throw DomainError("check_Y0_upper: a = 1, a = 0, m = 0 or am = b makes Y undefined");
    const Rational A(a), B(b), X(x_b), M(m), P(phi);
    const Rational Y = (1 - P / (A * M)) * (1 - (B - A * P + A * X) / ((A - 1) * (A * M - B))) + X / (A * M - B);
    Y0Check c;
    c.definitional = 1 - Y;
    c.factored = (M - P) * (B + X - P) / (M * (A - 1) * (A * M - B));
    c.definitional.canonicalize();
    c.factored.canonicalize();
    c.identity_holds = c.definitional == c.factored;
    c.in_window = a >= 2 && b >= 0 && b < m && phi <= std::min(b + x_b, m);
    c.nonnegative = sgn(c.factored) >= 0;
    return c;
}

/// Lower branch, n = am + b:
///   Y  = (1 - phi/(am) (1 + (m-phi)/(am))) (1 + (b + a phi - a y_b)/((a-1)(am+b))) + y_b/(am+b)
///   Y0 = Y - 1 = (m - phi)(am(b - y_b) + phi(y_b - b + m - phi)) / (m^2 a (a-1)(am + b))
inline Y0Check check_Y0_lower(std::int64_t a, std::int64_t b, std::int64_t y_b, std::int64_t m, std::int64_t phi) {
    if (a == 1 || a == 0 || m == 0 || a * m + b == 0)
        throw DomainError("check_Y0_lower: a = 1, a = 0, m = 0 or am + b = 0 makes Y undefined");
    const Rational A(a), B(b), Yb(y_b), M(m), P(phi);
    const Rational Y = (1 - P / (A * M) * (1 + (M - P) / (A * M))) *
                           (1 + (B + A * P - A * Yb) / ((A - 1) * (A * M + B))) +
                       Yb / (A * M + B);
    Y0Check c;
    c.definitional = Y - 1;
    c.factored = (M - P) * (A * M * (B - Yb) + P * (Yb - B + M - P)) / (M * M * A * (A - 1) * (A * M + B));
    c.definitional.canonicalize();
    c.factored.canonicalize();
    c.identity_holds = c.definitional == c.factored;
    c.in_window = a >= 2 && b >= 0 && b < m && m >= phi && phi - m + b <= y_b && y_b <= b;
    c.nonnegative = sgn(c.factored) >= 0;
    return c;
}

}  // namespace coprime
