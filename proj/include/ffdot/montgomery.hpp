#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "ffdot/instrument.hpp"
#include "ffdot/numtheory.hpp"

// Montgomery representation: element a is stored as aB mod p with radix B
// set to half the accumulator word (B = 2^16 for 32-bit words, 2^32 for
// 64-bit). Reduction (redc) replaces division by multiplies, one mask, one
// shift and a conditional subtraction.
//
// Admissible primes satisfy (p-1)^2 + p(B-1) < B^2, i.e. p <= 40499 for
// B = 2^16 and p <= 2654435761 for B = 2^32: that is the headroom needed for
// T + U*p to stay under B^2 inside redc when T is a product of residues.

namespace ffdot {

template <typename Word>
class MontgomeryField {
    static_assert(std::is_unsigned_v<Word> && (sizeof(Word) == 4 || sizeof(Word) == 8),
                  "MontgomeryField wants uint32_t or uint64_t");

public:
    using word_type = Word;
    using wide_type = std::conditional_t<sizeof(Word) == 4, std::uint64_t, u128>;

    static constexpr int shift = std::numeric_limits<Word>::digits / 2;
    static constexpr Word radix = Word(1) << shift; // B
    static constexpr Word mask = radix - 1;

    // Largest prime admitted by the defining inequality.
    static std::uint64_t max_prime() {
        const u128 b2 = u128(radix) * radix;
        std::uint64_t lo = 2, hi = 2 * std::uint64_t(radix);
        while (lo < hi) { // largest x with (x-1)^2 + x(B-1) < B^2
            const std::uint64_t mid = lo + (hi - lo + 1) / 2;
            if (u128(mid - 1) * (mid - 1) + u128(mid) * mask < b2)
                lo = mid;
            else
                hi = mid - 1;
        }
        return prev_prime(lo);
    }

    explicit MontgomeryField(std::uint64_t p) : p_(static_cast<Word>(p)) {
        if (!is_prime(p))
            throw std::domain_error("MontgomeryField: modulus " + std::to_string(p) + " is not prime");
        if (p == 2)
            throw std::domain_error("MontgomeryField: p must be odd (gcd(p, B) = 1)");
        if (u128(p - 1) * (p - 1) + u128(p) * mask >= u128(radix) * radix)
            throw std::domain_error("MontgomeryField: prime " + std::to_string(p) +
                                    " exceeds the radix-" + std::to_string(shift) +
                                    " bound (max " + std::to_string(max_prime()) + ")");
        n_im_ = static_cast<Word>(radix - inv_mod(p, radix)); // -p^{-1} mod B
        if (((n_im_ * p_) & mask) != mask)
            throw std::logic_error("MontgomeryField: n_im check failed");
    }

    Word p() const { return p_; }
    Word n_im() const { return n_im_; }

    // T*B^{-1} mod p for 0 <= T <= p*B. Two multiplications, one mask, one
    // shift, one conditional subtraction; no division anywhere.
    Word redc(wide_type T) const {
        FFDOT_COUNT(montgomery_reductions);
#ifdef FFDOT_INSTRUMENT
        if (T > wide_type(p_) * radix)
            throw std::logic_error("redc: input above p*B (caller bug)");
#endif
        const Word U = (static_cast<Word>(T) * n_im_) & mask;
        const wide_type t = (T + wide_type(U) * p_) >> shift;
        Word r = static_cast<Word>(t);
        if (r >= p_)
            r -= p_;
        return r;
    }

    // conversions (input/output staging, kept off the op counters)
    Word to_mont(Word a) const {
        return static_cast<Word>((wide_type(a) << shift) % p_);
    }

    Word from_mont(Word x) const { return redc(x); }

    // aB * bB needs one redc to come back to (ab)B
    Word mul(Word a, Word b) const { return redc(wide_type(a) * b); }

    // redc the product first, then a plain modular add of y: one reduction
    Word axpy(Word a, Word x, Word y) const {
        Word r = redc(wide_type(a) * x) + y;
        if (r >= p_)
            r -= p_;
        return r;
    }

    Word axpyin(Word r, Word a, Word x) const { return axpy(a, x, r); }

    // aB + bB = (a+b)B mod p: identical code paths to the classical field
    Word add(Word a, Word b) const {
        Word r = a + b;
        if (r >= p_)
            r -= p_;
        return r;
    }

    Word sub(Word a, Word b) const { return (a >= b) ? a - b : a + (p_ - b); }

    Word neg(Word a) const { return a == 0 ? 0 : p_ - a; }

    Word inv(Word a) const {
        return to_mont(static_cast<Word>(inv_mod(from_mont(a), p_)));
    }

    Word div(Word a, Word b) const { return mul(a, inv(b)); }

private:
    Word p_;
    Word n_im_;
};

using MontgomeryField16 = MontgomeryField<std::uint32_t>; // B = 2^16
using MontgomeryField32 = MontgomeryField<std::uint64_t>; // B = 2^32

} // namespace ffdot
