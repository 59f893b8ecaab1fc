#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ffdot/instrument.hpp"
#include "ffdot/numtheory.hpp"

// Residues held in IEEE doubles. Every value the field touches is an exact
// integer below 2^53, so all float arithmetic here is exact; reduction
// multiplies by a precomputed 1/p, floors, and repairs the at-most-one-off
// rounding of the quotient with a single +p or -p.
//
// The admissibility bound p(p-1) < 2^53 gives axpy its headroom and keeps
// floor(T/p)*p under 2^53 (hence exactly representable) for every reduction
// the element operations perform.

namespace ffdot {

class FloatField {
public:
    using word_type = double;

    static constexpr int mantissa_bits = 53;

    static std::uint64_t max_prime() {
        return max_prime_with_product_below(u128(1) << mantissa_bits);
    }

    explicit FloatField(std::uint64_t p) : p_(static_cast<double>(p)) {
        if (!is_prime(p))
            throw std::domain_error("FloatField: modulus " + std::to_string(p) + " is not prime");
        if (u128(p) * (p - 1) >= (u128(1) << mantissa_bits))
            throw std::domain_error("FloatField: prime " + std::to_string(p) +
                                    " exceeds the 53-bit mantissa bound (max " +
                                    std::to_string(max_prime()) + ")");
        inv_p_ = 1.0 / p_;
    }

    double p() const { return p_; }
    double inv_p() const { return inv_p_; }

    // T mod p for integer-valued T in [-p, 2^53). The flooring quotient is
    // off by at most one, so one correction lands the result in [0, p).
    double reduce(double T) const {
        FFDOT_COUNT(float_reductions);
        T -= std::floor(T * inv_p_) * p_;
        if (T < 0) {
            T += p_;
            FFDOT_COUNT(float_plus_adjust);
        } else if (T >= p_) {
            T -= p_;
            FFDOT_COUNT(float_minus_adjust);
        }
        return T;
    }

    double add(double a, double b) const {
        const double r = a + b; // <= 2p-2, exact
        return r >= p_ ? r - p_ : r;
    }

    double sub(double a, double b) const {
        const double r = a - b;
        return r < 0 ? r + p_ : r;
    }

    double neg(double a) const { return a == 0 ? 0 : p_ - a; }

    double mul(double a, double b) const { return reduce(a * b); }

    double axpy(double a, double x, double y) const {
        return reduce(std::fma(a, x, y));
    }

    double axpyin(double r, double a, double x) const { return axpy(a, x, r); }

    double inv(double a) const {
        return static_cast<double>(inv_mod(static_cast<std::uint64_t>(a),
                                           static_cast<std::uint64_t>(p_)));
    }

    double div(double a, double b) const { return mul(a, inv(b)); }

    double from_u64(std::uint64_t v) const {
        return static_cast<double>(v % static_cast<std::uint64_t>(p_));
    }

    std::uint64_t to_u64(double a) const { return static_cast<std::uint64_t>(a); }

private:
    double p_;
    double inv_p_;
};

} // namespace ffdot
