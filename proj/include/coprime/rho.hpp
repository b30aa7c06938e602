#pragma once

// The proportion rho(n, m) of permutations of Sym(n) whose order is coprime
// to m, computed from the cycle-of-the-first-point recurrence
//
//   n rho(n) = sum_{1 <= k <= n, (k,m) = 1} rho(n - k),         n < m
//   n rho(n) = (n - m) rho(n - m) + sum_{k in Phi(m)} rho(n - k),  n >= m
//
// with rho(0) = 1. Only the last rad(m) values are ever needed, so each
// stepper below keeps a ring buffer of that size.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/bigfloat.hpp"
#include "coprime/errors.hpp"

namespace coprime {

enum class Backend { ExactRational, Float };

enum class ExactMethod {
    RationalWindow,  // reduced rationals carried step to step
    IntegerCounts,   // |R(n,m)| as big integers, divided by n! on output
};

struct NumericConfig {
    std::int64_t exact_cutoff = 5000;
    long float_precision_bits = 128;
    ExactMethod exact_method = ExactMethod::RationalWindow;

    void validate() const {
        if (exact_cutoff < 0) throw DomainError("exact_cutoff must be >= 0");
        if (float_precision_bits < 53) throw DomainError("float_precision_bits must be >= 53");
    }
    Backend backend_for(std::int64_t n_max) const {
        return n_max <= exact_cutoff ? Backend::ExactRational : Backend::Float;
    }
};

namespace detail {

struct RationalOps {
    using value_type = Rational;
    value_type one() const { return Rational(1); }
    value_type zero() const { return Rational(0); }
    void add(value_type& acc, const value_type& v) const { acc += v; }
    void add_scaled(value_type& acc, const value_type& v, long s) const {
        if (s != 0) acc += v * s;
    }
    void divide(value_type& acc, long n) const { acc /= n; }
};

struct FloatOps {
    using value_type = BigFloat;
    long bits;
    mutable BigFloat scratch{bits};
    value_type one() const { return BigFloat(1L, bits); }
    value_type zero() const { return BigFloat(0L, bits); }
    void add(value_type& acc, const value_type& v) const { acc += v; }
    void add_scaled(value_type& acc, const value_type& v, long s) const {
        if (s != 0) acc.add_scaled(v, s, scratch);
    }
    void divide(value_type& acc, long n) const { acc /= n; }
};

}  // namespace detail

/// Walks rho(0), rho(1), ... for a fixed modulus with O(rad(m)) memory.
/// Summation order is fixed: ascending k over the coprime residues, then the
/// (n - m) rho(n - m) term last.
template <class Ops>
class RhoStepper {
  public:
    using value_type = typename Ops::value_type;

    RhoStepper(const Modulus& mod, Ops ops)
        : mod_(mod), ops_(std::move(ops)), ring_(static_cast<std::size_t>(mod.radical) + 1, ops_.zero()) {
        ring_[0] = ops_.one();
    }

    std::int64_t index() const { return n_; }
    const value_type& current() const { return at(n_); }

    const value_type& advance() {
        const std::int64_t n = ++n_;
        const std::int64_t m = mod_.radical;
        value_type acc = ops_.zero();
        if (m == 1) {
            acc = ops_.one();
        } else if (n < m) {
            for (std::int64_t k = 1; k <= n; ++k)
                if (mod_.coprime_to(k)) ops_.add(acc, at(n - k));
            ops_.divide(acc, n);
        } else {
            for (auto k : mod_.phi_set) ops_.add(acc, at(n - k));
            ops_.add_scaled(acc, at(n - m), n - m);
            ops_.divide(acc, n);
        }
        slot(n) = std::move(acc);
        return slot(n);
    }

  private:
    const value_type& at(std::int64_t j) const { return ring_[static_cast<std::size_t>(j) % ring_.size()]; }
    value_type& slot(std::int64_t j) { return ring_[static_cast<std::size_t>(j) % ring_.size()]; }

    Modulus mod_;
    Ops ops_;
    std::vector<value_type> ring_;
    std::int64_t n_ = 0;
};

/// Same recurrence on the integer counts r(n) = |R(n,m)| = n! rho(n):
///   r(n) = sum_k (n-1)_(k-1) r(n-k) + (n-1)_m r(n-m)
/// where (x)_j is the falling factorial x (x-1) ... (x-j+1).
class CountStepper {
  public:
    explicit CountStepper(const Modulus& mod)
        : mod_(mod), ring_(static_cast<std::size_t>(mod.radical) + 1) {
        ring_[0] = 1;
    }

    std::int64_t index() const { return n_; }
    const BigInt& current() const { return at(n_); }

    const BigInt& advance() {
        const std::int64_t n = ++n_;
        const std::int64_t m = mod_.radical;
        BigInt acc = 0;
        BigInt falling = 1;  // (n-1)_(k-1)
        const std::int64_t top = n < m ? n : m;
        for (std::int64_t k = 1; k <= top; ++k) {
            if (k > 1) falling *= (n - k + 1);
            if (mod_.coprime_to(k)) acc += falling * at(n - k);
        }
        if (n > m) {
            falling *= (n - m);  // now (n-1)_m
            acc += falling * at(n - m);
        }
        slot(n) = std::move(acc);
        return slot(n);
    }

  private:
    const BigInt& at(std::int64_t j) const { return ring_[static_cast<std::size_t>(j) % ring_.size()]; }
    BigInt& slot(std::int64_t j) { return ring_[static_cast<std::size_t>(j) % ring_.size()]; }

    Modulus mod_;
    std::vector<BigInt> ring_;
    std::int64_t n_ = 0;
};

/// rho(0..n_max) for one modulus in one backend. Immutable once built.
class RhoSeries {
  public:
    RhoSeries(Modulus mod, std::vector<Rational> values)
        : mod_(std::move(mod)), backend_(Backend::ExactRational), values_(std::move(values)) {}
    RhoSeries(Modulus mod, std::vector<BigFloat> values, long bits)
        : mod_(std::move(mod)), backend_(Backend::Float), bits_(bits), values_(std::move(values)) {}

    const Modulus& modulus() const { return mod_; }
    Backend backend() const { return backend_; }
    bool is_exact() const { return backend_ == Backend::ExactRational; }
    /// Mantissa bits of the float backend; 0 for exact series.
    long precision_bits() const { return bits_; }
    std::int64_t n_max() const {
        return static_cast<std::int64_t>(is_exact() ? exact_values().size() : float_values().size()) - 1;
    }

    const std::vector<Rational>& exact_values() const { return std::get<std::vector<Rational>>(values_); }
    const std::vector<BigFloat>& float_values() const { return std::get<std::vector<BigFloat>>(values_); }

    const Rational& exact(std::int64_t n) const {
        if (!is_exact()) throw std::logic_error("RhoSeries::exact on a float-backed series");
        return exact_values().at(static_cast<std::size_t>(n));
    }

    /// The value at n as a float of the requested precision.
    BigFloat approx(std::int64_t n, long bits) const {
        if (is_exact()) return BigFloat(exact(n), bits);
        BigFloat v(bits);
        mpfr_set(v.raw(), float_values().at(static_cast<std::size_t>(n)).raw(), MPFR_RNDN);
        return v;
    }
    double to_double(std::int64_t n) const {
        return is_exact() ? exact(n).get_d() : float_values().at(static_cast<std::size_t>(n)).to_double();
    }

  private:
    Modulus mod_;
    Backend backend_;
    long bits_ = 0;
    std::variant<std::vector<Rational>, std::vector<BigFloat>> values_;
};

/// |R(n,m)| for n = 0..n_max via the integer-count recurrence.
inline std::vector<BigInt> count_series(const Modulus& mod, std::int64_t n_max) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    std::vector<BigInt> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    CountStepper stepper(mod);
    out.push_back(stepper.current());
    while (stepper.index() < n_max) out.push_back(stepper.advance());
    return out;
}

inline RhoSeries rho_series_exact(const Modulus& mod, std::int64_t n_max,
                                  ExactMethod method = ExactMethod::RationalWindow) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(n_max) + 1);
    if (method == ExactMethod::IntegerCounts) {
        CountStepper stepper(mod);
        BigInt fact = 1;
        values.emplace_back(1);
        while (stepper.index() < n_max) {
            const BigInt& r = stepper.advance();
            fact *= stepper.index();
            Rational q(r, fact);
            q.canonicalize();
            values.push_back(std::move(q));
        }
    } else {
        RhoStepper stepper(mod, detail::RationalOps{});
        values.push_back(stepper.current());
        while (stepper.index() < n_max) values.push_back(stepper.advance());
    }
    return RhoSeries(mod, std::move(values));
}

inline RhoSeries rho_series_float(const Modulus& mod, std::int64_t n_max, long bits) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    if (bits < 53) throw DomainError("float precision must be >= 53 bits");
    std::vector<BigFloat> values;
    values.reserve(static_cast<std::size_t>(n_max) + 1);
    RhoStepper stepper(mod, detail::FloatOps{bits});
    values.push_back(stepper.current());
    while (stepper.index() < n_max) {
        const BigFloat& v = stepper.advance();
        if (!v.is_finite() || v.sign() <= 0)
            throw std::overflow_error("rho_series: float value left (0, 1] at n = " +
                                      std::to_string(stepper.index()));
        values.push_back(v);
    }
    return RhoSeries(mod, std::move(values), bits);
}

/// rho(0..n_max); exact up to cfg.exact_cutoff, extended-precision float beyond.
inline RhoSeries rho_series(const Modulus& mod, std::int64_t n_max, const NumericConfig& cfg = {}) {
    cfg.validate();
    if (cfg.backend_for(n_max) == Backend::ExactRational)
        return rho_series_exact(mod, n_max, cfg.exact_method);
    return rho_series_float(mod, n_max, cfg.float_precision_bits);
}

inline RhoSeries rho_series(const Modulus& mod, std::int64_t n_max, const NumericConfig& cfg, Backend backend) {
    cfg.validate();
    if (backend == Backend::ExactRational) return rho_series_exact(mod, n_max, cfg.exact_method);
    return rho_series_float(mod, n_max, cfg.float_precision_bits);
}

inline Rational rho_at_exact(const Modulus& mod, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    RhoStepper stepper(mod, detail::RationalOps{});
    while (stepper.index() < n) stepper.advance();
    return stepper.current();
}

inline BigFloat rho_at_float(const Modulus& mod, std::int64_t n, long bits) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (bits < 53) throw DomainError("float precision must be >= 53 bits");
    RhoStepper stepper(mod, detail::FloatOps{bits});
    while (stepper.index() < n) stepper.advance();
    return stepper.current();
}

using RhoValue = std::variant<Rational, BigFloat>;

/// Single value rho(n) with O(rad(m)) memory, backend chosen as in rho_series.
inline RhoValue rho_at(const Modulus& mod, std::int64_t n, const NumericConfig& cfg = {}) {
    cfg.validate();
    if (cfg.backend_for(n) == Backend::ExactRational) return rho_at_exact(mod, n);
    return rho_at_float(mod, n, cfg.float_precision_bits);
}

namespace detail {
/// prod_{i=1}^{floor(n/m)} (1 - 1/(i m)) as a reduced fraction.
inline Rational harmonic_deficit_product(std::int64_t m, std::int64_t n) {
    BigInt num = 1, den = 1;
    for (std::int64_t i = 1; i <= n / m; ++i) {
        num *= i * m - 1;
        den *= i * m;
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}
}  // namespace detail

/// rho(n, p) for a prime p from the closed product prod_{i<=n/p} (1 - 1/(ip)).
inline Rational rho_prime_closed_form(std::int64_t p, std::int64_t n) {
    if (!is_prime(p)) throw DomainError("rho_prime_closed_form: " + std::to_string(p) + " is not prime");
    if (n < 0) throw DomainError("n must be >= 0");
    return detail::harmonic_deficit_product(p, n);
}

/// Proportion of Sym(n) with no cycle length divisible by rad(m); an upper
/// bound for rho(n, m), with equality iff m is a prime power.
inline Rational p_not_m(const Modulus& mod, std::int64_t n) {
    if (n < 0) throw DomainError("n must be >= 0");
    return detail::harmonic_deficit_product(mod.radical, n);
}

/// C(m) = min { rho(n) : rad(m) <= n <= 2 rad(m) - 1 }.
inline Rational constant_C(const Modulus& mod) {
    const std::int64_t m = mod.radical;
    if (m == 1) return Rational(1);
    RhoStepper stepper(mod, detail::RationalOps{});
    while (stepper.index() < m) stepper.advance();
    Rational best = stepper.current();
    while (stepper.index() < 2 * m - 1) {
        const Rational& v = stepper.advance();
        if (v < best) best = v;
    }
    return best;
}

}  // namespace coprime
