#pragma once

// Ground-truth counts for |R(n,m)| that never touch the recurrence: explicit
// enumeration of Sym(n) for tiny n, and a sum over cycle types (integer
// partitions of n) weighted by conjugacy class size.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "coprime/arith.hpp"
#include "coprime/errors.hpp"

namespace coprime::oracle {

struct Limits {
    int direct_max_n = 9;       // 9! = 362880 permutations
    int partition_max_n = 60;   // p(60) = 966467 cycle types
};

inline constexpr Limits kDefaultLimits{};

/// |R(n,m)| by walking every permutation of {0..n-1}. The order of each
/// permutation is the lcm of its cycle lengths; m is used as given.
inline BigInt count_coprime_order_direct(int n, std::int64_t m, const Limits& limits = kDefaultLimits) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (m < 1) throw DomainError("m must be >= 1");
    if (n > limits.direct_max_n)
        throw ResourceCapError("direct enumeration capped at n = " + std::to_string(limits.direct_max_n));

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<char> seen(perm.size());
    std::uint64_t count = 0;
    do {
        std::fill(seen.begin(), seen.end(), 0);
        std::int64_t order = 1;
        for (int start = 0; start < n; ++start) {
            if (seen[static_cast<std::size_t>(start)]) continue;
            std::int64_t len = 0;
            for (int j = start; !seen[static_cast<std::size_t>(j)]; j = perm[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = 1;
                ++len;
            }
            order = std::lcm(order, len);
        }
        if (std::gcd(order, m) == 1) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return BigInt(static_cast<unsigned long>(count));
}

/// A conjugacy class of Sym(n): part sizes with multiplicities, descending.
struct CycleType {
    std::vector<std::pair<int, int>> parts;  // (length, multiplicity)
    BigInt perm_count;                       // n! / prod_j (j^c_j c_j!)
    BigInt order_lcm;                        // lcm of the lengths

    int size() const {
        int s = 0;
        for (auto [len, mult] : parts) s += len * mult;
        return s;
    }
};

namespace detail {

class CycleTypeWalker {
  public:
    CycleTypeWalker(int n, std::function<bool(int)> allowed, std::function<void(const CycleType&)> visit)
        : n_(n), allowed_(std::move(allowed)), visit_(std::move(visit)), n_factorial_(factorial(n)) {}

    void run() {
        CycleType ct;
        ct.order_lcm = 1;
        BigInt denom = 1;
        walk(n_, n_, denom, ct);
    }

  private:
    void walk(int remaining, int max_part, const BigInt& denom, CycleType& ct) {
        if (remaining == 0) {
            mpz_divexact(ct.perm_count.get_mpz_t(), n_factorial_.get_mpz_t(), denom.get_mpz_t());
            visit_(ct);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            if (!allowed_(part)) continue;
            const BigInt saved_lcm = ct.order_lcm;
            mpz_lcm_ui(ct.order_lcm.get_mpz_t(), saved_lcm.get_mpz_t(), static_cast<unsigned long>(part));
            for (int mult = remaining / part; mult >= 1; --mult) {
                BigInt d = denom;
                BigInt weight;
                mpz_ui_pow_ui(weight.get_mpz_t(), static_cast<unsigned long>(part), static_cast<unsigned long>(mult));
                d *= weight;
                d *= factorial(static_cast<unsigned long>(mult));
                ct.parts.emplace_back(part, mult);
                walk(remaining - part * mult, part - 1, d, ct);
                ct.parts.pop_back();
            }
            ct.order_lcm = saved_lcm;
        }
    }

    int n_;
    std::function<bool(int)> allowed_;
    std::function<void(const CycleType&)> visit_;
    BigInt n_factorial_;
};

inline void check_partition_cap(int n, const Limits& limits) {
    if (n < 0) throw DomainError("n must be >= 0");
    if (n > limits.partition_max_n)
        throw ResourceCapError("cycle-type enumeration capped at n = " + std::to_string(limits.partition_max_n));
}

}  // namespace detail

/// Visits every cycle type of Sym(n) whose parts all satisfy `allowed`, in
/// reverse-lexicographic order.
inline void for_each_cycle_type(int n, const std::function<bool(int)>& allowed,
                                const std::function<void(const CycleType&)>& visit,
                                const Limits& limits = kDefaultLimits) {
    detail::check_partition_cap(n, limits);
    detail::CycleTypeWalker(n, allowed, visit).run();
}

inline void for_each_cycle_type(int n, const std::function<void(const CycleType&)>& visit,
                                const Limits& limits = kDefaultLimits) {
    for_each_cycle_type(n, [](int) { return true; }, visit, limits);
}

/// The definitional predicate: gcd(order, m) = 1.
inline bool order_coprime(const CycleType& ct, std::int64_t m) {
    return mpz_gcd_ui(nullptr, ct.order_lcm.get_mpz_t(), static_cast<unsigned long>(m)) == 1;
}

/// The per-part predicate used for counting: every length is coprime to rad(m).
inline bool parts_coprime(const CycleType& ct, std::int64_t radical) {
    return std::all_of(ct.parts.begin(), ct.parts.end(),
                       [radical](auto pm) { return std::gcd(static_cast<std::int64_t>(pm.first), radical) == 1; });
}

/// |R(n,m)| summed over cycle types whose lengths are all coprime to rad(m).
inline BigInt count_coprime_order_partitions(int n, std::int64_t m, const Limits& limits = kDefaultLimits) {
    if (m < 1) throw DomainError("m must be >= 1");
    const std::int64_t radical = radical_of(m);
    BigInt total = 0;
    for_each_cycle_type(
        n, [radical](int part) { return std::gcd(static_cast<std::int64_t>(part), radical) == 1; },
        [&total](const CycleType& ct) { total += ct.perm_count; }, limits);
    return total;
}

/// Number of permutations of Sym(n) with no cycle length divisible by m.
inline BigInt count_no_cycle_divisible(int n, std::int64_t m, const Limits& limits = kDefaultLimits) {
    if (m < 1) throw DomainError("m must be >= 1");
    BigInt total = 0;
    for_each_cycle_type(
        n, [m](int part) { return part % m != 0; }, [&total](const CycleType& ct) { total += ct.perm_count; },
        limits);
    return total;
}

}  // namespace coprime::oracle
