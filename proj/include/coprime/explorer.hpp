#pragma once

// Residue-class behaviour of f(am + b, m): direction runs along each class,
// the ordering of the classes, their spread, and the exact ratio test that
// settles the prime case.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/asymptotics.hpp"
#include "coprime/bigfloat.hpp"
#include "coprime/rho.hpp"

namespace coprime {

enum class Direction { Up, Down, Flat };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Down: return "down";
        case Direction::Flat: return "flat";
    }
    return "?";
}

struct Run {
    Direction direction = Direction::Flat;
    std::int64_t length = 0;   // number of comparisons a -> a + 1
    std::int64_t a_start = 0;  // first a of the run
};

/// Direction structure of f(am + b, m) for a in [a_lo, a_hi]. Residues are
/// 0-based; `label()` gives the 1..m labelling in which residue 0 reads as m.
struct MonotonicityReport {
    Modulus modulus;
    std::int64_t residue = 0;
    std::int64_t a_lo = 0;
    std::int64_t a_hi = 0;
    bool exact = true;
    std::vector<Run> runs;
    std::optional<std::int64_t> eventually_monotonic_from;
    std::int64_t exact_recomputes = 0;  // float comparisons settled by the exact backend
    std::int64_t unresolved = 0;        // flat comparisons beyond the exact cutoff

    std::int64_t label() const { return residue == 0 ? modulus.radical : residue; }
    std::int64_t comparisons() const {
        std::int64_t s = 0;
        for (const auto& r : runs) s += r.length;
        return s;
    }
    std::vector<std::int64_t> run_lengths() const {
        std::vector<std::int64_t> out;
        for (const auto& r : runs) out.push_back(r.length);
        return out;
    }
};

namespace detail {

// f(0, m) is the n -> 0 limit of rho(n)(n/m)^(1 - phi/m): 1 for m = 1, else 0.
inline BigFloat f_from_series(const RhoSeries& series, std::int64_t n, long bits) {
    const Modulus& mod = series.modulus();
    if (n == 0) return BigFloat(mod.radical == 1 ? 1L : 0L, bits);
    return f_value(mod, n, series.approx(n, bits));
}

// Exact sign of f(n2) - f(n1), with f(n) = rho(n) (n/m)^e and e = -y >= 0:
// f(n2) > f(n1)  <=>  rho(n2)/rho(n1) > (n1/n2)^e.
inline int exact_f_sign(const Modulus& mod, const Rational& rho1, std::int64_t n1, const Rational& rho2,
                        std::int64_t n2) {
    if (n1 == 0 && mod.radical > 1) return 1;
    if (mod.radical == 1) return cmp(rho2, rho1);
    return exact_sign_minus_power(Rational(rho2 / rho1), Rational(n1, n2), Rational(-mod.y));
}

class FComparator {
  public:
    FComparator(const RhoSeries& series, const NumericConfig& cfg) : series_(series), cfg_(cfg) {}

    Direction compare(std::int64_t n1, std::int64_t n2, MonotonicityReport& rep) {
        const Modulus& mod = series_.modulus();
        if (series_.is_exact()) {
            constexpr long kBits = 256;
            const BigFloat f1 = f_from_series(series_, n1, kBits);
            const BigFloat f2 = f_from_series(series_, n2, kBits);
            const BigFloat diff = f2 - f1;
            BigFloat band = f2.abs();
            band *= BigFloat::two_pow(-200, kBits);
            if (diff.abs() > band) return diff.sign() > 0 ? Direction::Up : Direction::Down;
            return from_sign(exact_f_sign(mod, series_.exact(n1), n1, series_.exact(n2), n2));
        }
        const long bits = series_.precision_bits();
        const BigFloat f1 = f_from_series(series_, n1, bits);
        const BigFloat f2 = f_from_series(series_, n2, bits);
        const BigFloat diff = f2 - f1;
        BigFloat band = f2.ulp();
        band *= 8L;
        if (diff.abs() >= band) return diff.sign() > 0 ? Direction::Up : Direction::Down;
        if (n2 <= cfg_.exact_cutoff) {
            ++rep.exact_recomputes;
            const RhoSeries& ex = exact_prefix();
            return from_sign(exact_f_sign(mod, ex.exact(n1), n1, ex.exact(n2), n2));
        }
        ++rep.unresolved;
        return Direction::Flat;
    }

  private:
    static Direction from_sign(int s) { return s > 0 ? Direction::Up : (s < 0 ? Direction::Down : Direction::Flat); }

    const RhoSeries& exact_prefix() {
        if (!exact_)
            exact_ = rho_series_exact(series_.modulus(), std::min(series_.n_max(), cfg_.exact_cutoff),
                                      cfg_.exact_method);
        return *exact_;
    }

    const RhoSeries& series_;
    NumericConfig cfg_;
    std::optional<RhoSeries> exact_;
};

inline MonotonicityReport scan_residue(const RhoSeries& series, FComparator& comparator, std::int64_t b,
                                       std::int64_t a_lo, std::int64_t a_hi) {
    const Modulus& mod = series.modulus();
    MonotonicityReport rep;
    rep.modulus = mod;
    rep.residue = b;
    rep.a_lo = a_lo;
    rep.a_hi = a_hi;
    rep.exact = series.is_exact();
    for (std::int64_t a = a_lo; a < a_hi; ++a) {
        const Direction d = comparator.compare(a * mod.radical + b, (a + 1) * mod.radical + b, rep);
        if (!rep.runs.empty() && rep.runs.back().direction == d)
            ++rep.runs.back().length;
        else
            rep.runs.push_back({d, 1, a});
    }
    if (!rep.runs.empty() && rep.runs.back().direction != Direction::Flat)
        rep.eventually_monotonic_from = rep.runs.back().a_start;
    return rep;
}

inline void check_scan_args(const Modulus& mod, std::int64_t b, std::int64_t a_lo, std::int64_t a_hi) {
    if (b < 0 || b >= mod.radical)
        throw DomainError("residue " + std::to_string(b) + " outside [0, " + std::to_string(mod.radical - 1) + "]");
    if (a_lo < 0 || a_hi <= a_lo) throw DomainError("need 0 <= a_lo < a_hi");
}

}  // namespace detail

/// Runs of f(am + b) vs f((a+1)m + b) over a in [a_lo, a_hi]; a_hi - a_lo
/// comparisons. Exact when a_hi m + b fits under the exact cutoff; otherwise
/// float comparisons within 8 ulps are re-decided exactly when possible and
/// reported as flat (unresolved) when not.
inline MonotonicityReport scan_monotonicity(const Modulus& mod, std::int64_t b, std::int64_t a_hi,
                                            const NumericConfig& cfg = {}, std::int64_t a_lo = 0) {
    detail::check_scan_args(mod, b, a_lo, a_hi);
    const RhoSeries series = rho_series(mod, a_hi * mod.radical + b, cfg);
    detail::FComparator comparator(series, cfg);
    return detail::scan_residue(series, comparator, b, a_lo, a_hi);
}

struct ResidueScan {
    std::vector<MonotonicityReport> reports;  // one per residue, ascending
    std::optional<std::int64_t> shared_a0;    // max of the per-residue a0, if all exist
};

/// Every residue class of the modulus over a in [a_lo, a_hi], from one series.
inline ResidueScan scan_all_residues(const Modulus& mod, std::int64_t a_hi, const NumericConfig& cfg = {},
                                     std::int64_t a_lo = 0) {
    detail::check_scan_args(mod, 0, a_lo, a_hi);
    const RhoSeries series = rho_series(mod, a_hi * mod.radical + mod.radical - 1, cfg);
    detail::FComparator comparator(series, cfg);
    ResidueScan out;
    bool all = true;
    std::int64_t a0 = a_lo;
    for (std::int64_t b = 0; b < mod.radical; ++b) {
        out.reports.push_back(detail::scan_residue(series, comparator, b, a_lo, a_hi));
        const auto& e = out.reports.back().eventually_monotonic_from;
        if (e)
            a0 = std::max(a0, *e);
        else
            all = false;
    }
    if (all) out.shared_a0 = a0;
    return out;
}

// ---------------------------------------------------------------------------
// Prime moduli: exact ratio test
// ---------------------------------------------------------------------------

enum class PrimeStep : unsigned char { Increase, Decrease, Equal };

/// Direction of f(ap + b, p) -> f((a+1)p + b, p) from the closed product:
/// the ratio exceeds 1 iff (1 - 1/((a+1)p))^p > (ap + b)/(ap + b + p).
inline PrimeStep prime_ratio_step(std::int64_t p, std::int64_t a, std::int64_t b) {
    const std::int64_t x = (a + 1) * p;
    BigInt lhs_num, lhs_den;
    mpz_ui_pow_ui(lhs_num.get_mpz_t(), static_cast<unsigned long>(x - 1), static_cast<unsigned long>(p));
    mpz_ui_pow_ui(lhs_den.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(p));
    const BigInt rhs_num = a * p + b;
    const BigInt rhs_den = a * p + b + p;
    const int s = cmp(BigInt(lhs_num * rhs_den), BigInt(rhs_num * lhs_den));
    return s > 0 ? PrimeStep::Increase : (s < 0 ? PrimeStep::Decrease : PrimeStep::Equal);
}

struct Theorem32Result {
    std::int64_t p = 0;
    std::int64_t a_hi = 0;
    // holds[b][a]: 1 if the step a -> a+1 goes the predicted way, 0 if not,
    // -1 where nothing is predicted (decreasing classes below the threshold).
    std::vector<std::vector<signed char>> holds;
    std::int64_t checks = 0;
    std::int64_t exceptions = 0;

    bool all_hold() const { return exceptions == 0; }
    std::int64_t threshold() const { return p / 2; }  // least integer a >= (p-1)/2
};

/// For 0 <= b <= floor((p-1)/2) the class increases strictly for all a >= 0;
/// for larger b it decreases strictly once a >= (p-1)/2.
inline Theorem32Result verify_theorem32(std::int64_t p, std::int64_t a_hi) {
    if (!is_prime(p)) throw DomainError("verify_theorem32: " + std::to_string(p) + " is not prime");
    if (a_hi < 1) throw DomainError("verify_theorem32: a_hi must be >= 1");
    Theorem32Result r;
    r.p = p;
    r.a_hi = a_hi;
    const std::int64_t half = (p - 1) / 2;
    const std::int64_t a_min_dec = r.threshold();
    r.holds.assign(static_cast<std::size_t>(p), std::vector<signed char>(static_cast<std::size_t>(a_hi), -1));
    for (std::int64_t b = 0; b < p; ++b) {
        for (std::int64_t a = 0; a < a_hi; ++a) {
            const bool inc_class = b <= half;
            if (!inc_class && a < a_min_dec) continue;
            const PrimeStep step = prime_ratio_step(p, a, b);
            const bool ok = inc_class ? step == PrimeStep::Increase : step == PrimeStep::Decrease;
            r.holds[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = ok ? 1 : 0;
            ++r.checks;
            if (!ok) ++r.exceptions;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Ordering and spread of the residue curves
// ---------------------------------------------------------------------------

/// Residues sorted by f at the largest n of each class in [n_lo, n_hi],
/// highest curve first.
inline std::vector<std::int64_t> residue_ordering(const Modulus& mod, std::int64_t n_lo, std::int64_t n_hi,
                                                  const NumericConfig& cfg = {}) {
    const std::int64_t m = mod.radical;
    if (n_lo < m || n_lo < 1) throw DomainError("residue_ordering: n_lo must be >= m");
    if (n_hi - n_lo + 1 < m) throw DomainError("residue_ordering: window narrower than one residue cycle");
    const long bits = std::max<long>(cfg.float_precision_bits, 128);
    const RhoSeries series = rho_series(mod, n_hi, cfg);
    std::vector<std::pair<BigFloat, std::int64_t>> tops;
    for (std::int64_t n = n_hi; n > n_hi - m; --n) tops.emplace_back(f_value(mod, n, series.approx(n, bits)), n % m);
    std::stable_sort(tops.begin(), tops.end(), [](const auto& x, const auto& y) {
        if (x.first == y.first) return x.second < y.second;
        return x.first > y.first;
    });
    std::vector<std::int64_t> out;
    for (const auto& t : tops) out.push_back(t.second);
    return out;
}

/// max_b f(am + b) - min_b f(am + b).
inline double residue_spread(const Modulus& mod, std::int64_t a, const NumericConfig& cfg = {}) {
    if (a < 1) throw DomainError("residue_spread: a must be >= 1");
    const std::int64_t m = mod.radical;
    const long bits = std::max<long>(cfg.float_precision_bits, 128);
    const RhoSeries series = rho_series(mod, a * m + m - 1, cfg);
    BigFloat lo(bits), hi(bits);
    for (std::int64_t b = 0; b < m; ++b) {
        const BigFloat f = f_value(mod, a * m + b, series.approx(a * m + b, bits));
        if (b == 0 || f < lo) lo = f;
        if (b == 0 || f > hi) hi = f;
    }
    return (hi - lo).to_double();
}

}  // namespace coprime
