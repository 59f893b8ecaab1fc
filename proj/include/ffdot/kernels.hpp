#pragma once

// Dot-product kernels over the word-size field representations. The common
// theme: a modular dot product needs far fewer reductions than one per
// element, and each kernel buys those reductions back in a different
// currency (accumulator headroom, wrap detection, Montgomery block budgets).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>

#include "ffdot/floatrep.hpp"
#include "ffdot/instrument.hpp"
#include "ffdot/montgomery.hpp"
#include "ffdot/numtheory.hpp"
#include "ffdot/zpz.hpp"

namespace ffdot {

// Every kernel returns the canonical residue in [0, p). reductions counts the
// kernel's characteristic reduction events; each kernel documents what it
// counts (machine remainders, redc calls, or blocked segments). corrections
// counts overflow compensations applied on the way.
struct DotResult {
    std::uint64_t value = 0;
    std::uint64_t reductions = 0;
    std::uint64_t corrections = 0;
};

// Block-length planning. Each factory solves its kernel's capacity
// inequality for the largest admissible block length. lambda_max is the raw
// solution of the defining inequality; block additionally keeps whatever
// cushion the kernel needs for carried partial sums, so the two can differ
// by a step or two.
struct KernelConfig {
    std::uint64_t p = 0;
    unsigned m = 0;               // bits of the capacity bound 2^m
    std::uint64_t block = 1;      // operational block length
    std::uint64_t lambda_max = 1; // largest lambda with the defining inequality
    std::uint64_t corr = 0;       // 2^m mod p, the wrap compensation

    static KernelConfig blocked(std::uint64_t p, unsigned m);
    static KernelConfig blocked_centered(std::uint64_t p, unsigned m);
    static KernelConfig hybrid(std::uint64_t p, unsigned m);
    static KernelConfig montgomery_blocked(std::uint64_t p, unsigned radix_log2);
};

namespace detail {

inline void require_same_length(std::size_t nx, std::size_t ny) {
    if (nx != ny)
        throw std::invalid_argument("dot: input lengths differ");
}

inline void require_config(bool ok) {
    if (!ok)
        throw std::invalid_argument("dot: kernel config does not match the field");
}

inline void require_capacity(std::uint64_t p, unsigned m) {
    if (p < 2 || m < 2 || m > 64)
        throw std::domain_error("KernelConfig: need p >= 2 and 2 <= m <= 64");
    if (u128(p) * (p - 1) >= u128(1) << m)
        throw std::domain_error("KernelConfig: p(p-1) must stay below 2^m");
}

} // namespace detail

// largest lambda with lambda*(p-1)^2 < 2^m, shrunk until a partial sum
// carried below p still fits next to a full block
inline KernelConfig KernelConfig::blocked(std::uint64_t p, unsigned m) {
    detail::require_capacity(p, m);
    KernelConfig c;
    c.p = p;
    c.m = m;
    const u128 two_m = u128(1) << m;
    c.corr = static_cast<std::uint64_t>(two_m % p);
    const u128 sq = u128(p - 1) * (p - 1);
    c.lambda_max = static_cast<std::uint64_t>((two_m - 1) / (sq ? sq : 1));
    std::uint64_t k = c.lambda_max;
    while (k > 1 && u128(k) * sq > two_m - p)
        --k;
    c.block = k; // k = 1 always fits: (p-1)^2 + p <= 2^m follows from p(p-1) < 2^m
    return c;
}

// centered operands halve the magnitude, nearly quadrupling the product
// headroom in the signed word: lambda*((p-1)/2)^2 < 2^(m-1). The carried
// remainder is a C-style one in (-p, p), hence the 2h cushion.
inline KernelConfig KernelConfig::blocked_centered(std::uint64_t p, unsigned m) {
    if (p < 3 || p % 2 == 0 || m < 2 || m > 64)
        throw std::domain_error("KernelConfig: centered blocks need an odd p >= 3");
    const u128 half = u128(1) << (m - 1);
    const u128 h = (p - 1) / 2;
    if (h * h >= half)
        throw std::domain_error("KernelConfig: ((p-1)/2)^2 must stay below 2^(m-1)");
    KernelConfig c;
    c.p = p;
    c.m = m;
    c.corr = static_cast<std::uint64_t>((u128(1) << m) % p);
    c.lambda_max = static_cast<std::uint64_t>((half - 1) / (h * h));
    std::uint64_t k = c.lambda_max;
    while (k > 1 && u128(k) * h * h > half - 1 - 2 * h)
        --k;
    if (u128(k) * h * h > half - 1 - 2 * h)
        throw std::domain_error("KernelConfig: no centered block length fits this p and m");
    c.block = k;
    return c;
}

// lambda*(p-1)^2 + (p-1) = lambda*p*(p-1) < 2^m: tightening the blocked
// bound by one product's worth leaves room to add the wrap compensation
// without wrapping again, so blocks need no per-element tests at all
inline KernelConfig KernelConfig::hybrid(std::uint64_t p, unsigned m) {
    detail::require_capacity(p, m);
    KernelConfig c;
    c.p = p;
    c.m = m;
    const u128 two_m = u128(1) << m;
    c.corr = static_cast<std::uint64_t>(two_m % p);
    c.lambda_max = static_cast<std::uint64_t>((two_m - 1) / (u128(p) * (p - 1)));
    c.block = std::max<std::uint64_t>(1, c.lambda_max); // lambda = 1 always admissible
    return c;
}

// a block of Montgomery products must stay inside the redc domain:
// lambda*(p-1)^2 <= p*B, with B = 2^radix_log2
inline KernelConfig KernelConfig::montgomery_blocked(std::uint64_t p, unsigned radix_log2) {
    if (p < 3 || p % 2 == 0 || radix_log2 < 2 || radix_log2 > 32)
        throw std::domain_error("KernelConfig: Montgomery blocks need an odd p >= 3");
    const u128 radix = u128(1) << radix_log2;
    if (u128(p - 1) * (p - 1) + u128(p) * (radix - 1) >= radix * radix)
        throw std::domain_error("KernelConfig: p out of range for this Montgomery radix");
    KernelConfig c;
    c.p = p;
    c.m = 2 * radix_log2;
    c.corr = 0; // blocks never wrap, they respect the redc domain instead
    c.lambda_max = static_cast<std::uint64_t>((u128(p) << radix_log2) / (u128(p - 1) * (p - 1)));
    c.block = std::max<std::uint64_t>(1, c.lambda_max);
    return c;
}

// One fused multiply-add with an immediate remainder per element: the
// baseline every other kernel tries to beat. reductions = one per element.
template <class Word>
DotResult dot_naive(const ZpzField<Word>& f, std::span<const Word> x, std::span<const Word> y) {
    detail::require_same_length(x.size(), y.size());
    Word acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = f.axpy(x[i], y[i], acc);
    return {static_cast<std::uint64_t>(acc), x.size(), 0};
}

inline DotResult dot_naive(const FloatField& f, std::span<const double> x,
                           std::span<const double> y) {
    detail::require_same_length(x.size(), y.size());
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = f.axpy(x[i], y[i], acc);
    return {f.to_u64(acc), x.size(), 0};
}

// Montgomery-coded inputs. Decoding the accumulated result is itself a redc,
// hence one reduction more than the classical element count.
template <class Word>
DotResult dot_naive(const MontgomeryField<Word>& f, std::span<const Word> x,
                    std::span<const Word> y) {
    detail::require_same_length(x.size(), y.size());
    Word acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = f.axpy(x[i], y[i], acc);
    return {static_cast<std::uint64_t>(f.from_mont(acc)), x.size() + 1, 0};
}

// Accumulate raw products across the full word, reduce once at the end.
// Capacity n*(p-1)^2 < 2^m is checked here; use the blocked kernel past it.
template <class Word>
DotResult dot_delayed(const ZpzField<Word>& f, std::span<const Word> x, std::span<const Word> y) {
    static_assert(std::is_unsigned_v<Word>, "delayed accumulation runs on the unsigned word");
    detail::require_same_length(x.size(), y.size());
    const u128 sq = u128(f.p() - 1) * (f.p() - 1);
    if (sq != 0 && u128(x.size()) > ((u128(1) << std::numeric_limits<Word>::digits) - 1) / sq)
        throw std::domain_error("dot_delayed: dimension exceeds the no-overflow capacity");
    Word acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += static_cast<Word>(x[i] * y[i]);
    FFDOT_COUNT(machine_remainders);
    return {static_cast<std::uint64_t>(acc % f.p()), 1, 0};
}

// 53-bit variant: every partial sum below 2^53 is an exact integer, so the
// one reduction at the end returns the exact residue
inline DotResult dot_delayed(const FloatField& f, std::span<const double> x,
                             std::span<const double> y) {
    detail::require_same_length(x.size(), y.size());
    const auto p = static_cast<std::uint64_t>(f.p());
    if (u128(x.size()) * ((p - 1) * (p - 1)) >= u128(1) << 53)
        throw std::domain_error("dot_delayed: dimension would break 53-bit exactness");
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = std::fma(x[i], y[i], acc);
    return {f.to_u64(f.reduce(acc)), 1, 0};
}

// The delayed kernel applied blockwise: cfg.block products per remainder,
// carrying the partial residue into the next block. reductions = full
// blocks + the final strip.
template <class Word>
DotResult dot_blocked(const ZpzField<Word>& f, const KernelConfig& cfg, std::span<const Word> x,
                      std::span<const Word> y) {
    static_assert(std::is_unsigned_v<Word>, "blocked accumulation runs on the unsigned word");
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 8 * sizeof(Word));
    const std::size_t n = x.size();
    const auto K = static_cast<std::size_t>(cfg.block);
    Word res = 0;
    std::uint64_t reductions = 0;
    std::size_t i = 0;
    if (K < n) {
        for (; i + K <= n; i += K) {
            for (std::size_t j = i; j < i + K; ++j)
                res += static_cast<Word>(x[j] * y[j]);
            FFDOT_COUNT(machine_remainders);
            res %= f.p();
            ++reductions;
        }
    }
    for (; i < n; ++i)
        res += static_cast<Word>(x[i] * y[i]);
    FFDOT_COUNT(machine_remainders);
    res %= f.p();
    ++reductions;
    return {static_cast<std::uint64_t>(res), reductions, 0};
}

// Same block structure over centered operands; the halved magnitudes are
// what doubles the block length. The final sign fixup converts back to the
// canonical residue and is not a division.
template <class Word>
DotResult dot_blocked_centered(const ZpzField<Word>& f, const KernelConfig& cfg,
                               std::span<const Word> x, std::span<const Word> y) {
    static_assert(std::is_signed_v<Word>, "centered operands are signed");
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 8 * sizeof(Word));
    const std::size_t n = x.size();
    const auto K = static_cast<std::size_t>(cfg.block);
    const Word p = f.p();
    Word res = 0;
    std::uint64_t reductions = 0;
    std::size_t i = 0;
    if (K < n) {
        for (; i + K <= n; i += K) {
            for (std::size_t j = i; j < i + K; ++j)
                res += static_cast<Word>(x[j] * y[j]);
            FFDOT_COUNT(machine_remainders);
            res %= p;
            ++reductions;
        }
    }
    for (; i < n; ++i)
        res += static_cast<Word>(x[i] * y[i]);
    FFDOT_COUNT(machine_remainders);
    res %= p;
    ++reductions;
    if (res < 0)
        res += p;
    return {static_cast<std::uint64_t>(res), reductions, 0};
}

// Division on demand: let the accumulator wrap and repair each wrap with
// 2^m mod p. Since 0 <= product < 2^m, a wrap happened iff the sum shrank;
// the compensation itself cannot re-wrap because (p-1)^2 + p <= 2^m.
// One machine remainder total.
template <class Word>
DotResult dot_overflow(const ZpzField<Word>& f, const KernelConfig& cfg, std::span<const Word> x,
                       std::span<const Word> y) {
    static_assert(std::is_unsigned_v<Word>, "wrap detection needs the unsigned word");
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 8 * sizeof(Word));
    const auto corr = static_cast<Word>(cfg.corr);
    Word sum = 0;
    std::uint64_t corrections = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Word product = static_cast<Word>(x[i] * y[i]);
        sum += product;
        if (sum < product) {
            sum += corr;
            ++corrections;
        }
    }
    FFDOT_COUNT(machine_remainders);
    return {static_cast<std::uint64_t>(sum % f.p()), 1, corrections};
}

// Centered variant: overflow and underflow each take two tests. The signed
// accumulator is carried in the unsigned word so wraparound stays defined;
// the casts back are two's complement. In each branch the second test reads
// the previous sum's sign (product - sum is its negation), so the pair
// fires exactly on a signed range crossing. Known corner: a sum landing
// exactly on -2^(m-1) without crossing makes the next step's sign read
// ambiguous; products bounded by ((p-1)/2)^2 make that unreachable from
// canonical-centered inputs short of a deliberately crafted walk.
template <class Word>
DotResult dot_overflow_centered(const ZpzField<Word>& f, const KernelConfig& cfg,
                                std::span<const Word> x, std::span<const Word> y) {
    static_assert(std::is_signed_v<Word>, "centered operands are signed");
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 8 * sizeof(Word));
    using U = std::make_unsigned_t<Word>;
    const auto corr = static_cast<U>(cfg.corr);
    U sum = 0;
    std::uint64_t corrections = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Word prod_s = static_cast<Word>(x[i] * y[i]);
        const U product = static_cast<U>(prod_s);
        sum += product;
        const Word sum_s = static_cast<Word>(sum);
        if (sum_s < prod_s && static_cast<Word>(product - sum) < 0) {
            sum += corr; // crossed +2^(m-1): the value now reads 2^m too low
            ++corrections;
        } else if (prod_s < sum_s && static_cast<Word>(sum - product) < 0) {
            sum -= corr; // crossed -2^(m-1): the value now reads 2^m too high
            ++corrections;
        }
    }
    FFDOT_COUNT(machine_remainders);
    const Word p = f.p();
    Word s = static_cast<Word>(static_cast<Word>(sum) % p);
    if (s < 0)
        s += p;
    return {static_cast<std::uint64_t>(s), 1, corrections};
}

// Blocked overflow detection: no tests inside a block. The hybrid bound
// lambda*p*(p-1) < 2^m caps a block's contribution under 2^m, so at most
// one wrap can happen per block and one before/after comparison finds it.
// One machine remainder closes the whole product; reductions reports the
// number of blocked segments, the quantity that steps as p grows.
template <class Word>
DotResult dot_hybrid(const ZpzField<Word>& f, const KernelConfig& cfg, std::span<const Word> x,
                     std::span<const Word> y) {
    static_assert(std::is_unsigned_v<Word>, "wrap detection needs the unsigned word");
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 8 * sizeof(Word));
    const auto corr = static_cast<Word>(cfg.corr);
    const std::size_t n = x.size();
    const auto K = static_cast<std::size_t>(std::min<std::uint64_t>(cfg.block, SIZE_MAX / 2));
    Word sum = 0;
    std::uint64_t blocks = 0;
    std::uint64_t corrections = 0;
    for (std::size_t i = 0; i < n; i += K) {
        const std::size_t end = std::min(i + K, n);
        const Word before = sum;
        for (std::size_t j = i; j < end; ++j)
            sum += static_cast<Word>(x[j] * y[j]);
        ++blocks;
        if (sum < before) {
            sum += corr;
            ++corrections;
        }
    }
    FFDOT_COUNT(machine_remainders);
    const std::uint64_t value = sum % f.p();
    return {value, blocks == 0 ? 1 : blocks, corrections};
}

// Montgomery products accumulate in the wide type, one redc per block, and
// the running result stays Montgomery-coded below p. Decoding it at the end
// costs the one extra reduction over the classical blocked count.
template <class Word>
DotResult dot_montgomery_blocked(const MontgomeryField<Word>& f, const KernelConfig& cfg,
                                 std::span<const Word> x, std::span<const Word> y) {
    detail::require_same_length(x.size(), y.size());
    detail::require_config(cfg.p == static_cast<std::uint64_t>(f.p()) &&
                           cfg.m == 2 * unsigned(MontgomeryField<Word>::shift));
    using Wide = typename MontgomeryField<Word>::wide_type;
    const std::size_t n = x.size();
    const auto K = static_cast<std::size_t>(cfg.block);
    const Word p = f.p();
    Word acc = 0;
    std::uint64_t reductions = 0;
    std::size_t i = 0;
    if (K < n) {
        for (; i + K <= n; i += K) {
            Wide t = 0;
            for (std::size_t j = i; j < i + K; ++j)
                t += Wide(x[j]) * y[j];
            acc += f.redc(t);
            ++reductions;
            if (acc >= p)
                acc -= p;
        }
    }
    Wide t = 0;
    for (; i < n; ++i)
        t += Wide(x[i]) * y[i];
    acc += f.redc(t);
    ++reductions;
    if (acc >= p)
        acc -= p;
    acc = f.from_mont(acc);
    ++reductions;
    return {static_cast<std::uint64_t>(acc), reductions, 0};
}

} // namespace ffdot
