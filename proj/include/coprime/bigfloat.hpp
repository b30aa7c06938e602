#pragma once

// Fixed-precision binary floating point on top of MPFR. Every operation rounds
// to nearest at the precision of the destination, so results are
// reproducible across platforms for a given precision.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "coprime/arith.hpp"

namespace coprime {

class BigFloat {
  public:
    static constexpr long kDefaultBits = 128;

    explicit BigFloat(long bits = kDefaultBits) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(long value, long bits) : BigFloat(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }
    BigFloat(double value, long bits) : BigFloat(bits) { mpfr_set_d(v_, value, MPFR_RNDN); }
    BigFloat(const Rational& value, long bits) : BigFloat(bits) {
        mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigInt& value, long bits) : BigFloat(bits) {
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }

    BigFloat(const BigFloat& other) : BigFloat(other.precision()) {
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept : BigFloat(MPFR_PREC_MIN) { mpfr_swap(v_, other.v_); }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(v_, other.precision());
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }

    BigFloat& operator+=(const BigFloat& rhs) {
        mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator-=(const BigFloat& rhs) {
        mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator*=(const BigFloat& rhs) {
        mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator/=(const BigFloat& rhs) {
        mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator*=(long rhs) {
        mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator/=(long rhs) {
        mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
        return *this;
    }

    /// this += value * scale, rounded once per operation.
    void add_scaled(const BigFloat& value, long scale, BigFloat& scratch) {
        mpfr_mul_si(scratch.v_, value.v_, scale, MPFR_RNDN);
        mpfr_add(v_, v_, scratch.v_, MPFR_RNDN);
    }

    friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
    friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
    friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
    friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    int sign() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    BigFloat abs() const {
        BigFloat r(precision());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }

    /// Unit in the last place of this value at its precision.
    BigFloat ulp() const {
        BigFloat r(precision());
        if (mpfr_zero_p(v_)) {
            mpfr_set_ui_2exp(r.v_, 1, mpfr_get_emin(), MPFR_RNDN);
            return r;
        }
        mpfr_set_ui_2exp(r.v_, 1, mpfr_get_exp(v_) - precision(), MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Decimal rendering with `digits` significant digits (printf %g style).
    std::string to_string(int digits) const {
        char* raw = nullptr;
        mpfr_asprintf(&raw, "%.*Rg", digits, v_);
        std::string out(raw);
        mpfr_free_str(raw);
        return out;
    }

    /// Fixed-point rendering with `decimals` digits after the point.
    std::string to_fixed(int decimals) const {
        char* raw = nullptr;
        mpfr_asprintf(&raw, "%.*Rf", decimals, v_);
        std::string out(raw);
        mpfr_free_str(raw);
        return out;
    }

    friend BigFloat pow(const BigFloat& base, const BigFloat& exponent) {
        BigFloat r(base.precision());
        mpfr_pow(r.v_, base.v_, exponent.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat log(const BigFloat& x) {
        BigFloat r(x.precision());
        mpfr_log(r.v_, x.v_, MPFR_RNDN);
        return r;
    }

    static BigFloat two_pow(long exponent, long bits) {
        BigFloat r(bits);
        mpfr_set_ui_2exp(r.v_, 1, exponent, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

  private:
    mpfr_t v_;
};

/// base^exponent for a positive rational base and a rational exponent.
inline BigFloat rational_power(const Rational& base, const Rational& exponent, long bits) {
    return pow(BigFloat(base, bits), BigFloat(exponent, bits));
}

/// Exact sign of value - base^exponent for positive rationals, using integer
/// powers: with exponent = p/q (q > 0) compare value^q against base^p.
inline int exact_sign_minus_power(const Rational& value, const Rational& base, const Rational& exponent) {
    if (sgn(value) <= 0 || sgn(base) <= 0)
        throw DomainError("exact_sign_minus_power: value and base must be positive");
    const unsigned long q = exponent.get_den().get_ui();
    const long p = exponent.get_num().get_si();
    const unsigned long p_abs = static_cast<unsigned long>(p < 0 ? -p : p);

    BigInt lhs_num, lhs_den, rhs_num, rhs_den;
    mpz_pow_ui(lhs_num.get_mpz_t(), value.get_num_mpz_t(), q);
    mpz_pow_ui(lhs_den.get_mpz_t(), value.get_den_mpz_t(), q);
    if (p >= 0) {
        mpz_pow_ui(rhs_num.get_mpz_t(), base.get_num_mpz_t(), p_abs);
        mpz_pow_ui(rhs_den.get_mpz_t(), base.get_den_mpz_t(), p_abs);
    } else {
        mpz_pow_ui(rhs_num.get_mpz_t(), base.get_den_mpz_t(), p_abs);
        mpz_pow_ui(rhs_den.get_mpz_t(), base.get_num_mpz_t(), p_abs);
    }
    // x^q is monotone on positives, so sign(value - base^(p/q)) = sign(value^q - base^p).
    return cmp(BigInt(lhs_num * rhs_den), BigInt(rhs_num * lhs_den));
}

struct PowerComparison {
    int sign = 0;               // sign of value - coef * base^exponent
    BigFloat difference{256};   // value - coef * base^exponent, rounded
    bool used_exact = false;    // the float evaluation was too close to call
};

/// Decides value vs coef * base^exponent for positive rationals. A 256-bit
/// evaluation settles almost every case; near-ties fall back to exact integer
/// powers.
inline PowerComparison compare_to_power(const Rational& value, const Rational& coef, const Rational& base,
                                        const Rational& exponent) {
    constexpr long kBits = 256;
    PowerComparison out;
    const BigFloat lhs(value, kBits);
    BigFloat rhs(coef, kBits);
    if (sgn(exponent) != 0) rhs *= rational_power(base, exponent, kBits);
    out.difference = lhs - rhs;
    BigFloat scale = lhs.abs() > rhs.abs() ? lhs.abs() : rhs.abs();
    scale *= BigFloat::two_pow(-200, kBits);
    if (out.difference.abs() > scale) {
        out.sign = out.difference.sign();
        return out;
    }
    out.used_exact = true;
    out.sign = exact_sign_minus_power(Rational(value / coef), base, exponent);
    if (out.sign == 0) out.difference = BigFloat(0L, kBits);
    return out;
}

inline PowerComparison compare_to_power(const Rational& value, const Rational& base, const Rational& exponent) {
    return compare_to_power(value, Rational(1), base, exponent);
}

}  // namespace coprime
