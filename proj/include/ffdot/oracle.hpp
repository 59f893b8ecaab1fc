#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Reference implementations the tests compare everything else against.
// Deliberately naive and self-contained: no code shared with the tuned
// representations or kernels, one machine remainder wherever a reduction is
// due, wide-enough intermediates everywhere. Correctness over speed.

namespace ffdot::oracle {

// Dot product of canonical residues, result in [0, p). Requires p <= 2^32 so
// a product of two residues fits in 64 bits.
inline std::uint64_t dot(std::span<const std::uint64_t> x,
                         std::span<const std::uint64_t> y,
                         std::uint64_t p) {
    if (p < 2 || p > (std::uint64_t(1) << 32))
        throw std::domain_error("oracle::dot: modulus out of range");
    if (x.size() != y.size())
        throw std::invalid_argument("oracle::dot: length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::uint64_t prod = (x[i] % p) * (y[i] % p);
        acc = (acc + prod % p) % p;
    }
    return acc;
}

// Dot product of centered residues (each in [-(p-1)/2, (p-1)/2]); returns the
// canonical class representative in [0, p).
inline std::uint64_t dot_signed(std::span<const std::int64_t> x,
                                std::span<const std::int64_t> y,
                                std::uint64_t p) {
    if (p < 2 || p > (std::uint64_t(1) << 32))
        throw std::domain_error("oracle::dot_signed: modulus out of range");
    if (x.size() != y.size())
        throw std::invalid_argument("oracle::dot_signed: length mismatch");
    const std::int64_t m = static_cast<std::int64_t>(p);
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::int64_t prod = (x[i] % m) * (y[i] % m);
        acc = (acc + prod % m) % m;
    }
    return static_cast<std::uint64_t>((acc % m + m) % m);
}

// GF(p^d) as F_p[x] modulo a monic polynomial, with schoolbook arithmetic.
// Elements are coefficient vectors of length d, lowest degree first. Used to
// validate the log-table field without touching its construction code.
class PolyField {
public:
    using Elem = std::vector<std::uint32_t>;

    PolyField(std::uint32_t p, std::vector<std::uint32_t> monic_modulus)
        : p_(p), f_(std::move(monic_modulus)) {
        if (p_ < 2)
            throw std::domain_error("PolyField: characteristic must be at least 2");
        if (f_.size() < 2 || f_.back() != 1)
            throw std::domain_error("PolyField: modulus must be monic of degree >= 1");
        for (std::uint32_t c : f_)
            if (c >= p_)
                throw std::domain_error("PolyField: modulus coefficient out of range");
        d_ = f_.size() - 1;
        q_ = 1;
        for (std::size_t i = 0; i < d_; ++i) {
            if (q_ > (std::uint64_t(1) << 40) / p_)
                throw std::domain_error("PolyField: field too large for a reference object");
            q_ *= p_;
        }
    }

    std::uint32_t characteristic() const { return p_; }
    std::size_t degree() const { return d_; }
    std::uint64_t cardinality() const { return q_; }

    Elem zero() const { return Elem(d_, 0); }

    Elem one() const {
        Elem e(d_, 0);
        e[0] = 1;
        return e;
    }

    bool is_zero(const Elem& a) const {
        for (std::uint32_t c : a)
            if (c != 0)
                return false;
        return true;
    }

    // Enumerate elements by base-p digits, so tests can sweep the whole field.
    Elem from_index(std::uint64_t k) const {
        Elem e(d_, 0);
        for (std::size_t i = 0; i < d_; ++i) {
            e[i] = static_cast<std::uint32_t>(k % p_);
            k /= p_;
        }
        return e;
    }

    std::uint64_t to_index(const Elem& a) const {
        std::uint64_t k = 0;
        for (std::size_t i = d_; i-- > 0;)
            k = k * p_ + a[i];
        return k;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(d_);
        for (std::size_t i = 0; i < d_; ++i)
            r[i] = static_cast<std::uint32_t>((std::uint64_t(a[i]) + b[i]) % p_);
        return r;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(d_);
        for (std::size_t i = 0; i < d_; ++i)
            r[i] = static_cast<std::uint32_t>((std::uint64_t(a[i]) + p_ - b[i]) % p_);
        return r;
    }

    Elem neg(const Elem& a) const { return sub(zero(), a); }

    Elem mul(const Elem& a, const Elem& b) const {
        // schoolbook product, then fold x^d == -(f - x^d) down term by term
        std::vector<std::uint64_t> buf(2 * d_ - 1, 0);
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = 0; j < d_; ++j)
                buf[i + j] = (buf[i + j] + std::uint64_t(a[i]) * b[j]) % p_;
        for (std::size_t k = 2 * d_ - 2; k >= d_; --k) {
            const std::uint64_t c = buf[k];
            if (c != 0) {
                buf[k] = 0;
                for (std::size_t i = 0; i < d_; ++i)
                    buf[k - d_ + i] = (buf[k - d_ + i] + (p_ - f_[i]) * c) % p_;
            }
            if (k == d_)
                break;
        }
        Elem r(d_);
        for (std::size_t i = 0; i < d_; ++i)
            r[i] = static_cast<std::uint32_t>(buf[i]);
        return r;
    }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem acc = one();
        while (e != 0) {
            if (e & 1u)
                acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a))
            throw std::domain_error("PolyField: zero has no inverse");
        return pow(a, q_ - 2);
    }

    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

private:
    std::uint32_t p_;
    Elem f_;
    std::size_t d_ = 0;
    std::uint64_t q_ = 0;
};

} // namespace ffdot::oracle
