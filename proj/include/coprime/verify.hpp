#pragma once

// Property suites shared by the command-line front end and the acceptance
// runner. Each suite returns named checks with counts and worst margins;
// hard checks decide the verdict, soft ones are empirical tolerances that are
// only reported unless the caller asks for strict mode.

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/asymptotics.hpp"
#include "coprime/explorer.hpp"
#include "coprime/oracle.hpp"
#include "coprime/rho.hpp"

namespace coprime::verify {

struct Check {
    std::string name;
    bool hard = true;
    std::int64_t count = 0;
    std::int64_t failures = 0;
    std::optional<double> worst_margin;
    std::string detail;  // first failure, or a short note

    bool passed() const { return failures == 0; }

    void record(bool ok, const std::string& what = {}) {
        ++count;
        if (!ok && failures++ == 0) detail = what;
    }
    void margin(double v) {
        if (!worst_margin || v < *worst_margin) worst_margin = v;
    }
};

struct SuiteReport {
    std::string suite;
    std::deque<Check> checks;  // add() hands out references that must survive later adds

    Check& add(std::string name, bool hard = true) {
        checks.push_back(Check{std::move(name), hard});
        return checks.back();
    }
    bool hard_ok() const {
        for (const auto& c : checks)
            if (c.hard && !c.passed()) return false;
        return true;
    }
    bool soft_ok() const {
        for (const auto& c : checks)
            if (!c.hard && !c.passed()) return false;
        return true;
    }
    bool passed(bool strict = false) const { return hard_ok() && (!strict || soft_ok()); }
};

inline std::vector<std::int64_t> square_free_up_to(std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t m = 1; m <= hi; ++m)
        if (is_square_free(m)) out.push_back(m);
    return out;
}

namespace detail {

inline std::string at(std::int64_t n, std::int64_t m) {
    return "n=" + std::to_string(n) + " m=" + std::to_string(m);
}

inline Rational proportion(const BigInt& count, std::int64_t n) {
    Rational r(count, factorial(static_cast<unsigned long>(n)));
    r.canonicalize();
    return r;
}

// Uniform draw in [lo, hi]; modulo reduction keeps the stream identical
// across standard libraries, the bias is below 2^-40 for these ranges.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct OracleScope {
    std::int64_t direct_n_max = 9;
    std::vector<std::int64_t> direct_moduli = {2, 3, 4, 5, 6, 7, 10, 12, 15, 30};
    std::int64_t partition_n_max = 40;
    std::int64_t partition_m_max = 30;  // square-free moduli up to this bound
};

/// Engine against brute-force enumeration and against the cycle-type sum,
/// as exact rationals.
inline SuiteReport oracle_suite(const OracleScope& scope = {}) {
    SuiteReport rep{"oracle"};
    auto& direct = rep.add("engine = direct enumeration");
    for (auto m : scope.direct_moduli) {
        const auto series = rho_series_exact(make_modulus(m), scope.direct_n_max);
        for (std::int64_t n = 0; n <= scope.direct_n_max; ++n) {
            const Rational want = detail::proportion(oracle::count_coprime_order_direct(static_cast<int>(n), m), n);
            direct.record(series.exact(n) == want, detail::at(n, m));
        }
    }
    auto& parts = rep.add("engine = cycle-type sum");
    for (auto m : square_free_up_to(scope.partition_m_max)) {
        const auto series = rho_series_exact(make_modulus(m), scope.partition_n_max);
        for (std::int64_t n = 0; n <= scope.partition_n_max; ++n) {
            const Rational want =
                detail::proportion(oracle::count_coprime_order_partitions(static_cast<int>(n), m), n);
            parts.record(series.exact(n) == want, detail::at(n, m));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct Theorem1Scope {
    std::vector<std::int64_t> moduli = square_free_up_to(30);
    std::int64_t n_max = 10000;
    double float_margin = std::ldexp(1.0, -64);  // required slack beyond the exact cutoff
};

/// Two-sided power bound for every modulus: exact up to the cutoff, then a
/// float tail whose slack must clear `float_margin` on every inequality.
inline SuiteReport theorem1_suite(const Theorem1Scope& scope = {}, const NumericConfig& cfg = {}) {
    cfg.validate();
    SuiteReport rep{"theorem1"};
    auto& exact = rep.add("bounds, exact range");
    auto& smooth = rep.add("smooth forms implied by ceiling/floor forms");
    auto& tail = rep.add("bounds, float range");
    auto fold = [](Check& c, const BoundsReport& r) {
        c.count += r.checks();
        c.failures += static_cast<std::int64_t>(r.violations.size());
        if (c.detail.empty() && !r.violations.empty()) {
            const auto& v = r.violations.front();
            c.detail = v.bound + " " + detail::at(v.n, r.modulus.m) + " slack " + v.slack;
        }
        if (r.checks() > 0) c.margin(r.worst_margin);
    };
    for (auto m : scope.moduli) {
        const auto mod = make_modulus(m);
        const Rational C = constant_C(mod);
        // rho(n, 1) = 1 meets the bound with equality, so no float margin can
        // clear it; the all-ones series is cheap to keep exact at any length.
        const std::int64_t exact_hi = mod.radical == 1 ? scope.n_max : std::min(scope.n_max, cfg.exact_cutoff);
        if (exact_hi >= 1) {
            const auto series = rho_series_exact(mod, exact_hi, cfg.exact_method);
            const auto r = check_theorem1(series, C);
            fold(exact, r);
            smooth.record(r.smooth_implied, "m=" + std::to_string(m));
        }
        if (scope.n_max > exact_hi) {
            const auto series = rho_series_float(mod, scope.n_max, cfg.float_precision_bits);
            const auto r = check_theorem1(series, C, std::max<std::int64_t>(exact_hi + 1, 1), scope.n_max);
            fold(tail, r);
            smooth.record(r.smooth_implied, "m=" + std::to_string(m));
            const bool clear = r.worst_margin > scope.float_margin;
            if (!clear) {
                ++tail.failures;
                if (tail.detail.empty()) tail.detail = "margin at or below the float slack, m=" + std::to_string(m);
            }
        }
    }
    if (tail.count == 0) tail.detail = "not reached: n_max within the exact cutoff";
    return rep;
}

// ---------------------------------------------------------------------------

struct Lemma22Scope {
    int grid = 200;
    double a_max = 100.0;
    double slack = 1e-12;
};

/// 0 < L <= M < U over y in (-1, 0) (open grid) and a in [2, a_max].
inline SuiteReport lemma22_suite(const Lemma22Scope& scope = {}) {
    if (scope.grid < 2) throw DomainError("lemma22_suite: grid must be >= 2");
    SuiteReport rep{"lemma22"};
    auto& chain = rep.add("0 < L <= M < U");
    for (int i = 1; i <= scope.grid; ++i) {
        const double y = -1.0 + static_cast<double>(i) / (scope.grid + 1);
        for (int j = 0; j < scope.grid; ++j) {
            const double a = 2.0 + (scope.a_max - 2.0) * j / (scope.grid - 1);
            const auto t = check_lemma22(y, a);
            chain.record(t.chain_holds(scope.slack), "y=" + std::to_string(y) + " a=" + std::to_string(a));
            chain.margin(std::min({t.lower, t.middle - t.lower, t.upper - t.middle}));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 42;

struct Y0Scope {
    std::int64_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t m_max = 200;
    std::int64_t a_max = 10000;
    std::int64_t real_m_max = 30;  // square-free moduli whose true (x_b, y_b) are swept
    std::int64_t real_a_max = 50;
};

/// Both factorisations on seeded random tuples, then on the tuples that
/// actually occur for square-free moduli.
inline SuiteReport y0_suite(const Y0Scope& scope = {}) {
    if (scope.samples < 0 || scope.m_max < 2 || scope.a_max < 2) throw DomainError("y0_suite: bad scope");
    SuiteReport rep{"y0"};
    auto& up_id = rep.add("upper: definitional = factored");
    auto& lo_id = rep.add("lower: definitional = factored");
    auto& up_sign = rep.add("upper: Y0 >= 0 inside the window");
    auto& lo_sign = rep.add("lower: Y0 >= 0 inside the window");
    auto& real = rep.add("true window counts: identities and signs");
    std::mt19937_64 rng(scope.seed);
    auto tuple_str = [](std::int64_t a, std::int64_t b, std::int64_t x, std::int64_t m, std::int64_t phi) {
        return "a=" + std::to_string(a) + " b=" + std::to_string(b) + " x=" + std::to_string(x) +
               " m=" + std::to_string(m) + " phi=" + std::to_string(phi);
    };
    for (std::int64_t i = 0; i < scope.samples; ++i) {
        const auto m = detail::draw(rng, 2, scope.m_max);
        const auto phi = detail::draw(rng, 1, m);
        const auto a = detail::draw(rng, 2, scope.a_max);
        const auto b = detail::draw(rng, 0, m - 1);
        const auto x = detail::draw(rng, 0, m);
        const auto up = check_Y0_upper(a, b, x, m, phi);
        up_id.record(up.identity_holds, tuple_str(a, b, x, m, phi));
        if (up.in_window) up_sign.record(up.nonnegative, tuple_str(a, b, x, m, phi));
        const auto lo = check_Y0_lower(a, b, x, m, phi);
        lo_id.record(lo.identity_holds, tuple_str(a, b, x, m, phi));
        if (lo.in_window) lo_sign.record(lo.nonnegative, tuple_str(a, b, x, m, phi));
    }
    for (auto m : square_free_up_to(scope.real_m_max)) {
        if (m == 1) continue;
        const auto mod = make_modulus(m);
        for (std::int64_t a = 2; a <= scope.real_a_max; ++a)
            for (std::int64_t b = 0; b < m; ++b) {
                const auto xb = count_x(mod, b), yb = count_y(mod, b);
                const auto up = check_Y0_upper(a, b, xb, m, mod.phi);
                const auto lo = check_Y0_lower(a, b, yb, m, mod.phi);
                real.record(up.in_window && up.identity_holds && up.nonnegative && lo.in_window &&
                                lo.identity_holds && lo.nonnegative,
                            tuple_str(a, b, xb, m, mod.phi));
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct PrimeScope {
    std::vector<std::int64_t> primes = {2, 3, 5, 7, 11};
    std::int64_t a_hi = 1000;
    std::int64_t closed_form_n_max = 5000;
    std::int64_t closed_form_stride = 97;  // direct calls to the closed form; the rest use its running product
};

/// Closed product against the engine, the plateau rho(ap) = ... = rho(ap+p-1),
/// and the exact ratio test for the direction of every residue class.
inline SuiteReport theorem32_suite(const PrimeScope& scope = {}) {
    SuiteReport rep{"theorem32"};
    auto& closed = rep.add("closed product = engine");
    auto& plateau = rep.add("plateau across each block of p");
    auto& ratio = rep.add("class directions (ratio test)");
    for (auto p : scope.primes) {
        if (!is_prime(p)) throw DomainError("theorem32_suite: " + std::to_string(p) + " is not prime");
        const auto series = rho_series_exact(make_modulus(p), scope.closed_form_n_max);
        Rational running(1);
        for (std::int64_t n = 0; n <= scope.closed_form_n_max; ++n) {
            if (n > 0 && n % p == 0) running *= Rational(n - 1, n);
            closed.record(series.exact(n) == running, detail::at(n, p));
            if (n % scope.closed_form_stride == 0 || n == scope.closed_form_n_max)
                closed.record(rho_prime_closed_form(p, n) == running, detail::at(n, p));
            if (n % p != 0) plateau.record(series.exact(n) == series.exact(n - n % p), detail::at(n, p));
        }
        const auto r = verify_theorem32(p, scope.a_hi);
        ratio.count += r.checks;
        ratio.failures += r.exceptions;
        if (r.exceptions > 0 && ratio.detail.empty()) ratio.detail = "p=" + std::to_string(p);
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct MonotonicityScope {
    std::int64_t m = 6;
    std::optional<std::int64_t> residue;  // all residues when empty
    std::int64_t a_lo = 0;
    std::int64_t a_hi = 300;
    std::vector<std::int64_t> expect_runs;  // pinned run lengths for a single residue
};

struct MonotonicitySuite {
    SuiteReport report;
    std::vector<MonotonicityReport> scans;
    std::optional<std::int64_t> shared_a0;
};

/// Direction runs per residue; structural checks are hard, unresolved flat
/// comparisons are soft. For a prime modulus the runs are also checked
/// against the ratio-test prediction.
inline MonotonicitySuite monotonicity_suite(const MonotonicityScope& scope, const NumericConfig& cfg = {}) {
    MonotonicitySuite out;
    out.report.suite = "monotonicity";
    const auto mod = make_modulus(scope.m);
    if (scope.residue) {
        out.scans.push_back(scan_monotonicity(mod, *scope.residue, scope.a_hi, cfg, scope.a_lo));
        out.shared_a0 = out.scans.back().eventually_monotonic_from;
    } else {
        auto all = scan_all_residues(mod, scope.a_hi, cfg, scope.a_lo);
        out.scans = std::move(all.reports);
        out.shared_a0 = all.shared_a0;
    }
    auto& sums = out.report.add("run lengths sum to a_hi - a_lo");
    auto& flats = out.report.add("no unresolved comparisons", false);
    for (const auto& s : out.scans) {
        sums.record(s.comparisons() == scope.a_hi - scope.a_lo, "b=" + std::to_string(s.residue));
        flats.record(s.unresolved == 0, "b=" + std::to_string(s.residue));
    }
    if (!scope.expect_runs.empty()) {
        auto& pinned = out.report.add("pinned run lengths");
        for (const auto& s : out.scans) pinned.record(s.run_lengths() == scope.expect_runs, "b=" + std::to_string(s.residue));
    }
    if (mod.radical > 1 && is_prime(mod.radical)) {
        auto& pred = out.report.add("prime classes follow the ratio test");
        const std::int64_t p = mod.radical;
        for (const auto& s : out.scans)
            for (const auto& run : s.runs)
                for (std::int64_t a = run.a_start; a < run.a_start + run.length; ++a) {
                    if (a == 0 && s.residue == 0) continue;  // f(0) = 0
                    const auto step = prime_ratio_step(p, a, s.residue);
                    const Direction want = step == PrimeStep::Increase   ? Direction::Up
                                           : step == PrimeStep::Decrease ? Direction::Down
                                                                         : Direction::Flat;
                    pred.record(run.direction == want || run.direction == Direction::Flat,
                                "b=" + std::to_string(s.residue) + " a=" + std::to_string(a));
                }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct ConstantsScope {
    std::int64_t square_free_max = 30;
    std::int64_t k_m_max = 10000;
    std::int64_t prime_max = 100;
    double lambda_k_tol = 1e-10;
    std::int64_t et_n = 100000;
    std::vector<std::int64_t> et_primes = {2, 3, 5};
    double et_coef = 5.0;  // |f(n,p) - k(p)| <= et_coef / n, empirical
};

inline SuiteReport constants_suite(const ConstantsScope& scope = {}, const NumericConfig& cfg = {}) {
    SuiteReport rep{"constants"};
    auto& lp = rep.add("lambda_p = k(p)");
    for (std::int64_t p = 2; p <= scope.prime_max; ++p) {
        if (!is_prime(p)) continue;
        const double d = std::abs(lambda(make_modulus(p)) - k_constant(p));
        lp.record(d <= scope.lambda_k_tol, "p=" + std::to_string(p));
        lp.margin(scope.lambda_k_tol - d);
    }
    auto& kb = rep.add("pi^(-1/2) <= k(m) < 1");
    for (std::int64_t m = 2; m <= scope.k_m_max; ++m) {
        const double k = k_constant(m);
        kb.record(k >= std::numbers::inv_sqrtpi && k < 1.0, "m=" + std::to_string(m));
        kb.margin(std::min(k - std::numbers::inv_sqrtpi, 1.0 - k));
    }
    auto& cb = rep.add("C(m) <= lambda_m <= 1");
    for (auto m : square_free_up_to(scope.square_free_max)) {
        const double C = constant_C(make_modulus(m)).get_d();
        const double l = lambda(make_modulus(m));
        cb.record(C <= l && l <= 1.0, "m=" + std::to_string(m));
        cb.margin(std::min(l - C, 1.0 - l));
    }
    auto& et = rep.add("|f(n,p) - k(p)| <= c/n (empirical)", false);
    for (auto p : scope.et_primes) {
        const auto mod = make_modulus(p);
        const BigFloat rho = rho_at_float(mod, scope.et_n, cfg.float_precision_bits);
        const double d = std::abs(f_value(mod, scope.et_n, rho).to_double() - k_constant(p));
        const double tol = scope.et_coef / static_cast<double>(scope.et_n);
        et.record(d <= tol, "p=" + std::to_string(p));
        et.margin(tol - d);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Figure data: f(n, m) for n in [m + 1, n_max]
// ---------------------------------------------------------------------------

struct FigureRow {
    std::int64_t n = 0;
    std::string y;  // 12 significant digits
};

inline std::vector<FigureRow> figure_rows(const Modulus& mod, std::int64_t n_max, const NumericConfig& cfg = {}) {
    const std::int64_t first = mod.m + 1;
    if (n_max < first) throw DomainError("figure: n_max must be >= m + 1");
    const auto series = rho_series(mod, n_max, cfg);
    const long bits = std::max<long>(cfg.float_precision_bits, 128);
    std::vector<FigureRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max - first + 1));
    for (std::int64_t n = first; n <= n_max; ++n)
        rows.push_back({n, f_value(mod, n, series.approx(n, bits)).to_string(12)});
    return rows;
}

/// rho recovered from a rounded figure value, Y (n/m)^y, checked against both
/// ceiling/floor bounds with a relative band `rel_tol` for the rounding of Y.
inline bool figure_row_within_bounds(const Modulus& mod, const Rational& C, std::int64_t n, double y_value,
                                     double rel_tol = 1e-11) {
    const double m = static_cast<double>(mod.radical);
    const double y = mod.y.get_d();
    const double rho = y_value * std::pow(static_cast<double>(n) / m, y);
    const double upper = std::pow(std::ceil(static_cast<double>(n) / m), y);
    if (rho > upper * (1 + rel_tol)) return false;
    if (n < mod.radical) return true;
    const double lower = C.get_d() * std::pow(std::floor(static_cast<double>(n) / m), y);
    return rho >= lower * (1 - rel_tol);
}

}  // namespace coprime::verify
