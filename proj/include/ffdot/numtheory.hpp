#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

// Integer helpers shared by the field representations: extended gcd, modular
// arithmetic on 64-bit operands, deterministic primality, factorization by
// trial division, primitive roots, and prime scans under value bounds.

namespace ffdot {

using u128 = unsigned __int128;
using i128 = __int128;

struct EgcdResult {
    std::int64_t g; // gcd(a, b), non-negative
    std::int64_t x; // Bezout coefficients: a*x + b*y == g
    std::int64_t y;
};

constexpr EgcdResult egcd(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t old_r = a, r = b;
    std::int64_t old_x = 1, x = 0;
    std::int64_t old_y = 0, y = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_x -= q * x;
        std::swap(old_x, x);
        old_y -= q * y;
        std::swap(old_y, y);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_x = -old_x;
        old_y = -old_y;
    }
    return {old_r, old_x, old_y};
}

// Inverse of a modulo m, in [0, m). Requires m <= 2^63 - 1 so the extended
// gcd can run in signed 64-bit. Throws if a is not invertible mod m.
constexpr std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    if (m < 2 || m > static_cast<std::uint64_t>(INT64_MAX))
        throw std::domain_error("inv_mod: modulus out of range");
    a %= m;
    const EgcdResult e = egcd(static_cast<std::int64_t>(a), static_cast<std::int64_t>(m));
    if (e.g != 1)
        throw std::domain_error("inv_mod: argument not invertible");
    std::int64_t r = e.x % static_cast<std::int64_t>(m);
    if (r < 0)
        r += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r);
}

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    if (m == 1)
        return 0;
    std::uint64_t acc = 1;
    base %= m;
    while (exp != 0) {
        if (exp & 1u)
            acc = mul_mod(acc, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return acc;
}

namespace detail {

constexpr bool miller_rabin_witness(std::uint64_t n, std::uint64_t d, int s, std::uint64_t a) noexcept {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1)
        return false; // probably prime for this base
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1)
            return false;
    }
    return true; // composite witnessed
}

} // namespace detail

// Deterministic over the full 64-bit range with this fixed base set.
constexpr bool is_prime(std::uint64_t n) noexcept {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (detail::miller_rabin_witness(n, d, s, a))
            return false;
    }
    return true;
}

// Prime factors in ascending order, with multiplicity. Plain trial division;
// fine for the sizes this library feeds it (p - 1 for table-sized primes).
inline std::vector<std::uint64_t> factorize(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : {2ull, 3ull}) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    for (std::uint64_t f = 5; f * f <= n; f += 6) {
        for (std::uint64_t p : {f, f + 2}) {
            while (n % p == 0) {
                out.push_back(p);
                n /= p;
            }
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

// Smallest generator of the multiplicative group mod p. For p = 2 the group
// is trivial and 1 generates it.
inline std::uint64_t primitive_root(std::uint64_t p) {
    if (!is_prime(p))
        throw std::domain_error("primitive_root: modulus must be prime");
    if (p == 2)
        return 1;
    std::vector<std::uint64_t> factors = factorize(p - 1);
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
    for (std::uint64_t g = 2;; ++g) {
        bool generates = true;
        for (std::uint64_t f : factors) {
            if (pow_mod(g, (p - 1) / f, p) == 1) {
                generates = false;
                break;
            }
        }
        if (generates)
            return g;
    }
}

inline std::uint64_t next_prime(std::uint64_t n) {
    if (n <= 2)
        return 2;
    for (std::uint64_t c = n | 1;; c += 2)
        if (is_prime(c))
            return c;
}

inline std::uint64_t prev_prime(std::uint64_t n) {
    if (n < 2)
        throw std::domain_error("prev_prime: no prime below 2");
    if (n == 2)
        return 2;
    for (std::uint64_t c = (n % 2 == 0) ? n - 1 : n;; c -= 2) {
        if (is_prime(c))
            return c;
        if (c == 3)
            return 2;
    }
}

// Largest r with r*r <= n.
constexpr std::uint64_t isqrt(u128 n) noexcept {
    std::uint64_t lo = 0, hi = UINT64_MAX;
    while (lo < hi) {
        // upper midpoint, written so the full [0, 2^64-1] interval cannot
        // overflow the computation
        const std::uint64_t mid = lo + (hi - lo) / 2 + 1;
        if (static_cast<u128>(mid) * mid <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// Largest prime p with p*(p-1) < limit. This is the admissibility bound the
// word-size representations share: products of canonical residues must fit
// the accumulator width.
inline std::uint64_t max_prime_with_product_below(u128 limit) {
    if (limit <= 2)
        throw std::domain_error("max_prime_with_product_below: no prime qualifies");
    std::uint64_t c = isqrt(limit);
    while (static_cast<u128>(c + 1) * c < limit)
        ++c;
    while (c > 1 && static_cast<u128>(c) * (c - 1) >= limit)
        --c;
    // p*(p-1) is increasing, so every prime at or below c qualifies.
    return prev_prime(c);
}

} // namespace ffdot
