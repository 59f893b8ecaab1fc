#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "ffdot/instrument.hpp"
#include "ffdot/numtheory.hpp"

// Z/pZ with residues stored directly in a machine word, canonical range
// [0, p-1]. The constructor bound p(p-1) < 2^m (m = usable bits of the word)
// is what lets add/sub run without any remainder and axpy with exactly one:
// a*x + y <= (p-1)^2 + (p-1) = p(p-1) never overflows the word.
//
// Word selects the flavour: int32_t/int64_t give the signed variants
// (m = 31/63), uint32_t/uint64_t the unsigned ones (m = 32/64). Largest
// admissible primes: 46337, 65521, 3037000493, 4294967291.
//
// The signed variants double as the carrier for the centered storage
// convention (values in [-(p-1)/2, (p-1)/2]); see to_centered/from_centered.

namespace ffdot {

template <typename Word>
class ZpzField {
    static_assert(std::is_integral_v<Word> && sizeof(Word) >= 4,
                  "ZpzField wants a 32- or 64-bit machine word");

public:
    using word_type = Word;
    using signed_word = std::make_signed_t<Word>;

    // m: accumulator bits usable for magnitudes (31/32/63/64)
    static constexpr int accumulator_bits = std::numeric_limits<Word>::digits;

    static std::uint64_t max_prime() {
        return max_prime_with_product_below(u128(1) << accumulator_bits);
    }

    explicit ZpzField(std::uint64_t p) : p_(static_cast<Word>(p)) {
        if (!is_prime(p))
            throw std::domain_error("ZpzField: modulus " + std::to_string(p) + " is not prime");
        if (static_cast<u128>(p) * (p - 1) >= (u128(1) << accumulator_bits))
            throw std::domain_error("ZpzField: prime " + std::to_string(p) +
                                    " exceeds the " + std::to_string(accumulator_bits) +
                                    "-bit storage bound (max " + std::to_string(max_prime()) + ")");
    }

    Word p() const { return p_; }

    // one word addition, one comparison, at most one subtraction
    Word add(Word a, Word b) const {
        Word r = a + b;
        if (r >= p_)
            r -= p_;
        return r;
    }

    Word sub(Word a, Word b) const {
        // for unsigned words, compute a + (p - b) when a < b so the
        // intermediate never dips below zero
        return (a >= b) ? a - b : a + (p_ - b);
    }

    Word neg(Word a) const { return a == 0 ? 0 : p_ - a; }

    // machine multiplication and one machine remainder
    Word mul(Word a, Word b) const {
        FFDOT_COUNT(machine_remainders);
        return static_cast<Word>((a * b) % p_);
    }

    Word inv(Word a) const {
        return static_cast<Word>(inv_mod(static_cast<std::uint64_t>(a),
                                         static_cast<std::uint64_t>(p_)));
    }

    Word div(Word a, Word b) const { return mul(a, inv(b)); }

    // a*x + y in the word (the constructor bound guarantees the headroom),
    // then the single remainder
    Word axpy(Word a, Word x, Word y) const {
        FFDOT_COUNT(machine_remainders);
        return static_cast<Word>((a * x + y) % p_);
    }

    Word axpyin(Word r, Word a, Word x) const { return axpy(a, x, r); }

    signed_word to_centered(Word a) const {
        require_odd_p("to_centered");
        const signed_word half = static_cast<signed_word>((p_ - 1) / 2);
        const signed_word v = static_cast<signed_word>(a);
        return v > half ? v - static_cast<signed_word>(p_) : v;
    }

    Word from_centered(signed_word c) const {
        require_odd_p("from_centered");
        return c < 0 ? static_cast<Word>(c + static_cast<signed_word>(p_))
                     : static_cast<Word>(c);
    }

    // canonicalize an arbitrary 64-bit value (input preparation, not an
    // element operation: its remainder is deliberately uncounted)
    Word from_u64(std::uint64_t v) const {
        return static_cast<Word>(v % static_cast<std::uint64_t>(p_));
    }

private:
    void require_odd_p(const char* who) const {
        if (p_ == 2)
            throw std::domain_error(std::string(who) +
                                    ": p = 2 has no symmetric centered range");
    }

    Word p_;
};

using ZpzField32 = ZpzField<std::int32_t>;
using ZpzField32u = ZpzField<std::uint32_t>;
using ZpzField64 = ZpzField<std::int64_t>;
using ZpzField64u = ZpzField<std::uint64_t>;

} // namespace ffdot
