#pragma once

// Number-theoretic kernel: radicals, totients, the coprime residue set of a
// modulus, the Moebius function, and the x_i / y_i window counts.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coprime/errors.hpp"

namespace coprime {

using Rational = mpq_class;
using BigInt = mpz_class;

inline constexpr std::int64_t kMaxModulus = std::numeric_limits<std::int32_t>::max();

/// Distinct prime divisors of n in ascending order (trial division).
inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> primes;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        primes.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline bool is_square_free(std::int64_t n) {
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        if (n % p == 0) n /= p;
    }
    return true;
}

inline std::int64_t radical_of(std::int64_t n) {
    std::int64_t r = 1;
    for (auto p : prime_factors(n)) r *= p;
    return r;
}

/// Euler's totient, computed from the prime factorisation.
inline std::int64_t totient(std::int64_t n) {
    std::int64_t t = n;
    for (auto p : prime_factors(n)) t = t / p * (p - 1);
    return t;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> small, large;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// mu(d): (-1)^(number of prime factors) for square-free d, else 0.
inline int moebius(std::int64_t d) {
    if (d < 1) throw DomainError("moebius: argument must be positive, got " + std::to_string(d));
    if (!is_square_free(d)) return 0;
    return prime_factors(d).size() % 2 == 0 ? 1 : -1;
}

/// Arithmetic profile of a modulus. Everything downstream works with the
/// radical; `m` is kept only for reporting.
struct Modulus {
    std::int64_t m = 1;
    std::int64_t radical = 1;
    std::vector<std::int64_t> primes;
    std::vector<std::int64_t> phi_set;  // ascending, residues in [1, radical] coprime to radical
    std::int64_t phi = 1;
    Rational y{0};  // phi / radical - 1

    bool coprime_to(std::int64_t k) const { return std::gcd(k, radical) == 1; }
    std::int64_t smallest_prime() const { return primes.empty() ? 0 : primes.front(); }
    /// The exponent deficit radical - phi, so that y = -(deficit / radical).
    std::int64_t deficit() const { return radical - phi; }
};

inline Modulus make_modulus(std::int64_t m) {
    if (m < 1) throw DomainError("modulus must be >= 1, got " + std::to_string(m));
    if (m > kMaxModulus) throw ResourceCapError("modulus exceeds 2^31-1: " + std::to_string(m));

    Modulus mod;
    mod.m = m;
    mod.primes = prime_factors(m);
    mod.radical = 1;
    for (auto p : mod.primes) mod.radical *= p;
    for (std::int64_t k = 1; k <= mod.radical; ++k)
        if (std::gcd(k, mod.radical) == 1) mod.phi_set.push_back(k);
    mod.phi = static_cast<std::int64_t>(mod.phi_set.size());
    mod.y = Rational(mod.phi, mod.radical) - 1;
    mod.y.canonicalize();
    return mod;
}

inline void check_window_index(const Modulus& mod, std::int64_t i, const char* who) {
    if (i < 0 || i >= mod.radical)
        throw DomainError(std::string(who) + ": index " + std::to_string(i) + " outside [0, " +
                          std::to_string(mod.radical - 1) + "]");
}

/// x_i = #{k in Phi : k < radical - i}.
inline std::int64_t count_x(const Modulus& mod, std::int64_t i) {
    check_window_index(mod, i, "count_x");
    auto end = std::lower_bound(mod.phi_set.begin(), mod.phi_set.end(), mod.radical - i);
    return static_cast<std::int64_t>(end - mod.phi_set.begin());
}

/// y_i = #{k in Phi : k <= i}.
inline std::int64_t count_y(const Modulus& mod, std::int64_t i) {
    check_window_index(mod, i, "count_y");
    auto end = std::upper_bound(mod.phi_set.begin(), mod.phi_set.end(), i);
    return static_cast<std::int64_t>(end - mod.phi_set.begin());
}

inline BigInt factorial(unsigned long n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

}  // namespace coprime
