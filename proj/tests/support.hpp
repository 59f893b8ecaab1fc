#pragma once

// Shared helpers for the kernel tests and the acceptance checks: deterministic
// input generation and a name-driven runner covering every kernel ×
// representation combination the bench tool exposes.

#include "ffdot/kernels.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ffdot::testsupport {

struct Combo {
    const char* kernel;
    const char* rep;
};

// the full dot-product matrix: which representations carry which kernel
inline constexpr Combo dot_matrix[] = {
    {"naive", "zpz32"},
    {"naive", "zpz32u"},
    {"naive", "zpz64"},
    {"naive", "zpz64u"},
    {"naive", "float53"},
    {"naive", "mont16"},
    {"naive", "mont32"},
    {"delayed64", "zpz64u"},
    {"delayed53", "float53"},
    {"blocked", "zpz32u"},
    {"blocked", "zpz64u"},
    {"blocked-centered", "centered32"},
    {"blocked-centered", "centered64"},
    {"overflow", "zpz32u"},
    {"overflow", "zpz64u"},
    {"overflow-centered", "centered32"},
    {"overflow-centered", "centered64"},
    {"hybrid", "zpz32u"},
    {"hybrid", "zpz64u"},
    {"montgomery-blocked", "mont16"},
    {"montgomery-blocked", "mont32"},
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::vector<std::uint64_t> random_residues(std::uint64_t seed, std::size_t n,
                                                  std::uint64_t p) {
    std::vector<std::uint64_t> v(n);
    std::uint64_t s = seed;
    for (auto& e : v)
        e = splitmix64(s) % p;
    return v;
}

namespace detail {

template <class Word>
std::vector<Word> as_words(const std::vector<std::uint64_t>& v) {
    std::vector<Word> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        w[i] = static_cast<Word>(v[i]);
    return w;
}

template <class Word>
std::optional<DotResult> run_zpz(const std::string& kernel, std::uint64_t p,
                                 const std::vector<std::uint64_t>& xs,
                                 const std::vector<std::uint64_t>& ys) {
    if (p > ZpzField<Word>::max_prime())
        return std::nullopt;
    ZpzField<Word> f(p);
    const auto x = as_words<Word>(xs), y = as_words<Word>(ys);
    const std::span<const Word> sx(x), sy(y);
    constexpr unsigned m = 8 * sizeof(Word);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if constexpr (std::is_unsigned_v<Word>) {
        if (kernel == "delayed64")
            return dot_delayed(f, sx, sy);
        if (kernel == "blocked")
            return dot_blocked(f, KernelConfig::blocked(p, m), sx, sy);
        if (kernel == "overflow")
            return dot_overflow(f, KernelConfig::blocked(p, m), sx, sy);
        if (kernel == "hybrid")
            return dot_hybrid(f, KernelConfig::hybrid(p, m), sx, sy);
    }
    throw std::invalid_argument("run_dot: no such zpz kernel: " + kernel);
}

template <class Word>
std::optional<DotResult> run_centered(const std::string& kernel, std::uint64_t p,
                                      const std::vector<std::uint64_t>& xs,
                                      const std::vector<std::uint64_t>& ys) {
    static_assert(std::is_signed_v<Word>);
    if (p == 2 || p > ZpzField<Word>::max_prime())
        return std::nullopt;
    ZpzField<Word> f(p);
    std::vector<Word> x(xs.size()), y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x[i] = f.to_centered(static_cast<Word>(xs[i]));
        y[i] = f.to_centered(static_cast<Word>(ys[i]));
    }
    const std::span<const Word> sx(x), sy(y);
    constexpr unsigned m = 8 * sizeof(Word);
    if (kernel == "blocked-centered")
        return dot_blocked_centered(f, KernelConfig::blocked_centered(p, m), sx, sy);
    if (kernel == "overflow-centered")
        return dot_overflow_centered(f, KernelConfig::blocked_centered(p, m), sx, sy);
    throw std::invalid_argument("run_dot: no such centered kernel: " + kernel);
}

template <class Word>
std::optional<DotResult> run_mont(const std::string& kernel, std::uint64_t p,
                                  const std::vector<std::uint64_t>& xs,
                                  const std::vector<std::uint64_t>& ys) {
    if (p == 2 || p > MontgomeryField<Word>::max_prime())
        return std::nullopt;
    MontgomeryField<Word> f(p);
    std::vector<Word> x(xs.size()), y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x[i] = f.to_mont(static_cast<Word>(xs[i]));
        y[i] = f.to_mont(static_cast<Word>(ys[i]));
    }
    const std::span<const Word> sx(x), sy(y);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if (kernel == "montgomery-blocked")
        return dot_montgomery_blocked(
            f, KernelConfig::montgomery_blocked(p, MontgomeryField<Word>::shift), sx, sy);
    throw std::invalid_argument("run_dot: no such montgomery kernel: " + kernel);
}

inline std::optional<DotResult> run_float(const std::string& kernel, std::uint64_t p,
                                          const std::vector<std::uint64_t>& xs,
                                          const std::vector<std::uint64_t>& ys) {
    if (p > FloatField::max_prime())
        return std::nullopt;
    FloatField f(p);
    std::vector<double> x(xs.size()), y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x[i] = static_cast<double>(xs[i]);
        y[i] = static_cast<double>(ys[i]);
    }
    const std::span<const double> sx(x), sy(y);
    if (kernel == "naive")
        return dot_naive(f, sx, sy);
    if (kernel == "delayed53") {
        if (u128(xs.size()) * ((p - 1) * (p - 1)) >= u128(1) << 53)
            return std::nullopt; // dimension exceeds the one-reduction capacity
        return dot_delayed(f, sx, sy);
    }
    throw std::invalid_argument("run_dot: no such float kernel: " + kernel);
}

} // namespace detail

// Runs one matrix cell on canonical residue inputs, returning the canonical
// result. nullopt means the representation cannot host this prime (or, for
// delayed kernels, this dimension).
inline std::optional<DotResult> run_dot(const std::string& kernel, const std::string& rep,
                                        std::uint64_t p,
                                        const std::vector<std::uint64_t>& xs,
                                        const std::vector<std::uint64_t>& ys) {
    if (rep == "zpz32")
        return detail::run_zpz<std::int32_t>(kernel, p, xs, ys);
    if (rep == "zpz32u")
        return detail::run_zpz<std::uint32_t>(kernel, p, xs, ys);
    if (rep == "zpz64")
        return detail::run_zpz<std::int64_t>(kernel, p, xs, ys);
    if (rep == "zpz64u") {
        if (kernel == "delayed64") {
            const u128 sq = u128(p - 1) * (p - 1);
            if (sq != 0 && u128(xs.size()) > (~u128(0) >> 64) / sq)
                return std::nullopt; // would exceed the 64-bit accumulator
        }
        return detail::run_zpz<std::uint64_t>(kernel, p, xs, ys);
    }
    if (rep == "centered32")
        return detail::run_centered<std::int32_t>(kernel, p, xs, ys);
    if (rep == "centered64")
        return detail::run_centered<std::int64_t>(kernel, p, xs, ys);
    if (rep == "mont16")
        return detail::run_mont<std::uint32_t>(kernel, p, xs, ys);
    if (rep == "mont32")
        return detail::run_mont<std::uint64_t>(kernel, p, xs, ys);
    if (rep == "float53")
        return detail::run_float(kernel, p, xs, ys);
    throw std::invalid_argument("run_dot: no such representation: " + rep);
}

} // namespace ffdot::testsupport
