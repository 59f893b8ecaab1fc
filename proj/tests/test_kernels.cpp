#include "doctest.h"

#include "ffdot/instrument.hpp"
#include "ffdot/kernels.hpp"
#include "ffdot/numtheory.hpp"
#include "ffdot/oracle.hpp"
#include "support.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

using ffdot::DotResult;
using ffdot::KernelConfig;
using ffdot::u128;
using ffdot::testsupport::random_residues;
using ffdot::testsupport::run_dot;
using i128 = __int128;

namespace {

u128 pow2(unsigned m) { return u128(1) << m; }

// every prime a 16-bit Montgomery radix still admits, plus the word maxima
constexpr std::uint64_t equivalence_primes[] = {2,     3,        101,        2897,
                                                40499, 65521,    94906249,   2654435761ull,
                                                4294967291ull};

} // namespace

TEST_CASE("kernel config factories solve their defining inequalities") {
    const std::uint64_t primes[] = {3, 5, 101, 1009, 2887, 2897, 32749, 40009, 46337, 65521};
    for (const std::uint64_t p : primes) {
        for (const unsigned m : {32u, 64u}) {
            const u128 sq = u128(p - 1) * (p - 1);

            // full-word blocked: the largest block of products a word can hold
            const auto b = KernelConfig::blocked(p, m);
            CHECK(b.p == p);
            CHECK(b.m == m);
            CHECK(b.corr == std::uint64_t(pow2(m) % p));
            CHECK(u128(b.lambda_max) * sq < pow2(m));
            CHECK(u128(b.lambda_max + 1) * sq >= pow2(m));
            // the working block additionally leaves room for the carried residue
            CHECK(b.block >= 1);
            CHECK(b.block <= b.lambda_max);
            if (b.block > 1)
                CHECK(u128(b.block) * sq <= pow2(m) - p);

            // hybrid: one wrap per block needs the stronger p*(p-1) bound
            const auto h = KernelConfig::hybrid(p, m);
            const u128 pq = u128(p) * (p - 1);
            CHECK(u128(h.lambda_max) * pq < pow2(m));
            CHECK(u128(h.lambda_max + 1) * pq >= pow2(m));
            CHECK(h.block == std::max<std::uint64_t>(1, h.lambda_max));
            CHECK(h.corr == b.corr);

            // centered: products shrink to ((p-1)/2)^2 against a 2^(m-1) budget
            if (p % 2 == 1) {
                const auto c = KernelConfig::blocked_centered(p, m);
                const u128 hh = u128((p - 1) / 2) * ((p - 1) / 2);
                CHECK(u128(c.lambda_max) * hh < pow2(m - 1));
                CHECK(u128(c.lambda_max + 1) * hh >= pow2(m - 1));
                CHECK(c.block >= 1);
                CHECK(c.block <= c.lambda_max);
                if (c.block > 1)
                    CHECK(u128(c.block) * hh <= pow2(m - 1) - 1 - (p - 1));
                // halving the operands at least doubles the block capacity
                CHECK(c.lambda_max >= 2 * b.lambda_max);
            }
        }

        // Montgomery: block sums must stay inside the redc domain p*B
        if (p % 2 == 1) {
            for (const unsigned r : {16u, 32u}) {
                if (r == 16 && p > ffdot::MontgomeryField16::max_prime())
                    continue;
                const auto mb = KernelConfig::montgomery_blocked(p, r);
                const u128 sq = u128(p - 1) * (p - 1);
                const u128 pB = u128(p) << r;
                CHECK(mb.m == 2 * r);
                CHECK(mb.corr == 0);
                CHECK(u128(mb.lambda_max) * sq <= pB);
                CHECK(u128(mb.lambda_max + 1) * sq > pB);
                CHECK(mb.block == std::max<std::uint64_t>(1, mb.lambda_max));
            }
        }
    }
}

TEST_CASE("kernel config landmark values") {
    CHECK(KernelConfig::blocked(2897, 32).lambda_max == 512);
    CHECK(KernelConfig::blocked(2897, 32).block == 512);
    CHECK(KernelConfig::blocked(65521, 32).block == 1);
    CHECK(KernelConfig::blocked(32749, 32).corr == 1444);
    CHECK(KernelConfig::blocked(32749, 32).corr == std::uint64_t(pow2(32) % 32749));

    CHECK(KernelConfig::hybrid(2887, 32).lambda_max == 515);
    CHECK(KernelConfig::hybrid(2897, 32).lambda_max == 511);
    // at 64 bits the hybrid block for a 16-bit prime runs into the billions
    const auto big = KernelConfig::hybrid(40009, 64);
    CHECK(big.lambda_max > 11'400'000'000ull);
    CHECK(big.lambda_max < 11'600'000'000ull);

    CHECK(KernelConfig::blocked_centered(101, 32).block == 858993);
    CHECK(KernelConfig::blocked_centered(46337, 32).block == 4);

    CHECK(KernelConfig::montgomery_blocked(101, 16).block == 661);
    CHECK(KernelConfig::montgomery_blocked(40499, 16).block == 1);
}

TEST_CASE("kernel config rejects unusable parameters") {
    CHECK_THROWS_AS((void)KernelConfig::blocked_centered(2, 32), std::domain_error);
    CHECK_THROWS_AS((void)KernelConfig::blocked_centered(4294967291ull, 32), std::domain_error);
}

TEST_CASE("every kernel/representation pair matches the reference dot product") {
    const std::size_t dims[] = {0, 1, 2, 511, 512, 513, 1000};
    for (const std::uint64_t p : equivalence_primes) {
        for (const std::size_t n : dims) {
            const auto xr = random_residues(p * 1000003 + n, n, p);
            const auto yr = random_residues(p * 2000003 + n, n, p);
            const std::vector<std::uint64_t> top(n, p - 1);

            const std::uint64_t want_r = ffdot::oracle::dot(xr, yr, p);
            const std::uint64_t want_t = ffdot::oracle::dot(top, top, p);

            for (const auto& combo : ffdot::testsupport::dot_matrix) {
                CAPTURE(combo.kernel);
                CAPTURE(combo.rep);
                CAPTURE(p);
                CAPTURE(n);
                if (const auto got = run_dot(combo.kernel, combo.rep, p, xr, yr))
                    CHECK(got->value == want_r);
                if (const auto got = run_dot(combo.kernel, combo.rep, p, top, top))
                    CHECK(got->value == want_t);
            }
        }
    }
}

TEST_CASE("empty input conventions") {
    const std::vector<std::uint64_t> none;
    for (const auto& combo : ffdot::testsupport::dot_matrix) {
        const auto got = run_dot(combo.kernel, combo.rep, 101, none, none);
        REQUIRE(got.has_value());
        CHECK(got->value == 0);
        CHECK(got->corrections == 0);
        std::uint64_t expected;
        const std::string k = combo.kernel;
        const std::string r = combo.rep;
        if (k == "montgomery-blocked")
            expected = 2; // the empty strip still pays a redc, plus the decode
        else if (k == "naive")
            expected = (r == "mont16" || r == "mont32") ? 1 : 0;
        else
            expected = 1; // the single closing remainder is unconditional
        CHECK(got->reductions == expected);
    }
}

TEST_CASE("all kernels reject mismatched span lengths") {
    ffdot::ZpzField32u f(101);
    const std::vector<std::uint32_t> a(3, 1), b(4, 1);
    const auto cfg = KernelConfig::blocked(101, 32);
    CHECK_THROWS_AS((void)ffdot::dot_naive(f, std::span<const std::uint32_t>(a),
                                           std::span<const std::uint32_t>(b)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_delayed(f, std::span<const std::uint32_t>(a),
                                             std::span<const std::uint32_t>(b)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_blocked(f, cfg, std::span<const std::uint32_t>(a),
                                             std::span<const std::uint32_t>(b)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_overflow(f, cfg, std::span<const std::uint32_t>(a),
                                              std::span<const std::uint32_t>(b)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_hybrid(f, KernelConfig::hybrid(101, 32),
                                            std::span<const std::uint32_t>(a),
                                            std::span<const std::uint32_t>(b)),
                    std::invalid_argument);
}

TEST_CASE("blocked kernels reject a config built for another field") {
    ffdot::ZpzField32u f(101);
    const std::vector<std::uint32_t> a(4, 1);
    const std::span<const std::uint32_t> s(a);
    CHECK_THROWS_AS((void)ffdot::dot_blocked(f, KernelConfig::blocked(103, 32), s, s),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_blocked(f, KernelConfig::blocked(101, 64), s, s),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_overflow(f, KernelConfig::hybrid(103, 32), s, s),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ffdot::dot_hybrid(f, KernelConfig::hybrid(101, 64), s, s),
                    std::invalid_argument);

    ffdot::MontgomeryField16 mf(101);
    const std::vector<std::uint32_t> ma(4, mf.to_mont(1));
    const std::span<const std::uint32_t> ms(ma);
    CHECK_THROWS_AS((void)ffdot::dot_montgomery_blocked(mf, KernelConfig::montgomery_blocked(101, 32), ms, ms),
                    std::invalid_argument);
}

TEST_CASE("delayed kernels throw past their no-overflow capacity") {
    ffdot::ZpzField32u f32(65521);
    const std::vector<std::uint32_t> two(2, 65520), one(1, 65520);
    const std::vector<std::uint64_t> one_ref(1, 65520);
    CHECK(ffdot::dot_delayed(f32, std::span<const std::uint32_t>(one),
                             std::span<const std::uint32_t>(one))
              .value == ffdot::oracle::dot(one_ref, one_ref, 65521));
    CHECK_THROWS_AS((void)ffdot::dot_delayed(f32, std::span<const std::uint32_t>(two),
                                             std::span<const std::uint32_t>(two)),
                    std::domain_error);

    ffdot::FloatField ff(94906249);
    const std::vector<double> fone(1, 94906248.0), ftwo(2, 94906248.0);
    const std::vector<std::uint64_t> fone_ref(1, 94906248);
    CHECK(ffdot::dot_delayed(ff, std::span<const double>(fone), std::span<const double>(fone))
              .value == ffdot::oracle::dot(fone_ref, fone_ref, 94906249));
    CHECK_THROWS_AS((void)ffdot::dot_delayed(ff, std::span<const double>(ftwo),
                                             std::span<const double>(ftwo)),
                    std::domain_error);

    ffdot::ZpzField64u f64(4294967291ull);
    const std::vector<std::uint64_t> u1(1, 4294967290ull), u2(2, 4294967290ull);
    CHECK_NOTHROW((void)ffdot::dot_delayed(f64, std::span<const std::uint64_t>(u1),
                                           std::span<const std::uint64_t>(u1)));
    CHECK_THROWS_AS((void)ffdot::dot_delayed(f64, std::span<const std::uint64_t>(u2),
                                             std::span<const std::uint64_t>(u2)),
                    std::domain_error);
}

TEST_CASE("reduction counts follow each kernel's block structure") {
    auto& c = ffdot::instrument::counters;
    const std::uint64_t p = 101;
    ffdot::ZpzField32u f(p);

    for (const std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(2), std::size_t(5),
                                std::size_t(6), std::size_t(7), std::size_t(12), std::size_t(13),
                                std::size_t(100)}) {
        CAPTURE(n);
        const auto xs = random_residues(n + 11, n, p);
        const auto ys = random_residues(n + 13, n, p);
        std::vector<std::uint32_t> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
        const std::span<const std::uint32_t> sx(x), sy(y);
        const std::uint64_t want = ffdot::oracle::dot(xs, ys, p);

        c.reset();
        auto r = ffdot::dot_naive(f, sx, sy);
        CHECK(r.value == want);
        CHECK(r.reductions == n);
        CHECK(c.machine_remainders == n);

        c.reset();
        r = ffdot::dot_delayed(f, sx, sy);
        CHECK(r.value == want);
        CHECK(r.reductions == 1);
        CHECK(c.machine_remainders == 1);

        // shrink the block so the loop structure is exercised at small dims;
        // a smaller block than the factory's always respects the capacity
        for (const std::uint64_t K : {std::uint64_t(1), std::uint64_t(3), std::uint64_t(5)}) {
            auto cfg = KernelConfig::blocked(p, 32);
            cfg.block = K;
            const std::uint64_t full = K < n ? n / K : 0;
            c.reset();
            r = ffdot::dot_blocked(f, cfg, sx, sy);
            CHECK(r.value == want);
            CHECK(r.reductions == full + 1);
            CHECK(c.machine_remainders == full + 1);
        }

        c.reset();
        r = ffdot::dot_overflow(f, KernelConfig::blocked(p, 32), sx, sy);
        CHECK(r.value == want);
        CHECK(r.reductions == 1);
        CHECK(c.machine_remainders == 1);

        for (const std::uint64_t K : {std::uint64_t(2), std::uint64_t(5)}) {
            auto cfg = KernelConfig::hybrid(p, 32);
            cfg.block = K;
            const std::uint64_t blocks = n == 0 ? 1 : (n + K - 1) / K;
            c.reset();
            r = ffdot::dot_hybrid(f, cfg, sx, sy);
            CHECK(r.value == want);
            CHECK(r.reductions == blocks);
            CHECK(c.machine_remainders == 1); // segments, not remainders
        }
    }
}

TEST_CASE("centered kernel reduction counts") {
    auto& c = ffdot::instrument::counters;
    const std::uint64_t p = 101;
    ffdot::ZpzField32 f(p);

    for (const std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(4), std::size_t(9),
                                std::size_t(10), std::size_t(11)}) {
        CAPTURE(n);
        const auto xs = random_residues(n + 17, n, p);
        const auto ys = random_residues(n + 19, n, p);
        std::vector<std::int32_t> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = f.to_centered(std::int32_t(xs[i]));
            y[i] = f.to_centered(std::int32_t(ys[i]));
        }
        const std::span<const std::int32_t> sx(x), sy(y);
        const std::uint64_t want = ffdot::oracle::dot(xs, ys, p);

        for (const std::uint64_t K : {std::uint64_t(1), std::uint64_t(5)}) {
            auto cfg = KernelConfig::blocked_centered(p, 32);
            cfg.block = K;
            const std::uint64_t full = K < n ? n / K : 0;
            c.reset();
            const auto r = ffdot::dot_blocked_centered(f, cfg, sx, sy);
            CHECK(r.value == want);
            CHECK(r.reductions == full + 1);
            CHECK(c.machine_remainders == full + 1);
        }

        c.reset();
        const auto r = ffdot::dot_overflow_centered(f, KernelConfig::blocked_centered(p, 32),
                                                    sx, sy);
        CHECK(r.value == want);
        CHECK(r.reductions == 1);
        CHECK(c.machine_remainders == 1);
    }
}

TEST_CASE("montgomery blocked reduction counts equal instrumented redc calls") {
    auto& c = ffdot::instrument::counters;
    for (const std::uint64_t p : {std::uint64_t(101), std::uint64_t(40499)}) {
        ffdot::MontgomeryField16 f{std::uint32_t(p)};
        const auto cfg = KernelConfig::montgomery_blocked(p, 16);
        for (const std::size_t n :
             {std::size_t(0), std::size_t(1), std::size_t(511), std::size_t(512),
              std::size_t(513), std::size_t(660), std::size_t(661), std::size_t(662)}) {
            CAPTURE(p);
            CAPTURE(n);
            const auto xs = random_residues(p + n, n, p);
            const auto ys = random_residues(p + n + 1, n, p);
            std::vector<std::uint32_t> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = f.to_mont(std::uint32_t(xs[i]));
                y[i] = f.to_mont(std::uint32_t(ys[i]));
            }
            const std::uint64_t K = cfg.block;
            const std::uint64_t full = K < n ? n / K : 0;

            c.reset();
            const auto r = ffdot::dot_montgomery_blocked(f, cfg, std::span<const std::uint32_t>(x),
                                                         std::span<const std::uint32_t>(y));
            CHECK(r.value == ffdot::oracle::dot(xs, ys, p));
            CHECK(r.reductions == full + 2);
            CHECK(c.montgomery_reductions == r.reductions);
        }
    }
    // the two landmark shapes: a block that swallows dim 512 whole, and a
    // prime so large the block degenerates to a single product
    CHECK(KernelConfig::montgomery_blocked(101, 16).block == 661);
    {
        ffdot::MontgomeryField16 f(101);
        std::vector<std::uint32_t> x(512, f.to_mont(7)), y(512, f.to_mont(9));
        const auto r = ffdot::dot_montgomery_blocked(f, KernelConfig::montgomery_blocked(101, 16),
                                                     std::span<const std::uint32_t>(x),
                                                     std::span<const std::uint32_t>(y));
        CHECK(r.reductions == 2);
    }
    {
        ffdot::MontgomeryField16 f(40499);
        std::vector<std::uint32_t> x(512, f.to_mont(7)), y(512, f.to_mont(9));
        const auto r = ffdot::dot_montgomery_blocked(f, KernelConfig::montgomery_blocked(40499, 16),
                                                     std::span<const std::uint32_t>(x),
                                                     std::span<const std::uint32_t>(y));
        CHECK(r.reductions == 514);
    }
}

TEST_CASE("overflow kernel corrections match an arithmetic wrap model") {
    // model: true running sum held in 128 bits, a wrap event is the sum
    // leaving [0, 2^m) and the repair is the same 2^m mod p the kernel adds
    const auto simulate = [](const std::vector<std::uint64_t>& xs,
                             const std::vector<std::uint64_t>& ys, std::uint64_t p,
                             unsigned m) {
        const u128 modulus = pow2(m);
        const u128 corr = modulus % p;
        u128 w = 0;
        std::uint64_t wraps = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            w += u128(xs[i]) * ys[i];
            if (w >= modulus) {
                w -= modulus;
                w += corr;
                ++wraps;
            }
        }
        return std::pair<std::uint64_t, std::uint64_t>(std::uint64_t(w % p), wraps);
    };

    SUBCASE("32-bit word, adversarial all-maximal input") {
        const std::uint64_t p = 65521;
        ffdot::ZpzField32u f(p);
        const std::size_t n = 512;
        const std::vector<std::uint64_t> top(n, p - 1);
        std::vector<std::uint32_t> t(n, std::uint32_t(p - 1));
        const auto [want, wraps] = simulate(top, top, p, 32);
        CHECK(want == ffdot::oracle::dot(top, top, p));
        CHECK(wraps >= 3); // the accumulator laps the word hundreds of times here

        const auto r = ffdot::dot_overflow(f, KernelConfig::blocked(p, 32),
                                           std::span<const std::uint32_t>(t),
                                           std::span<const std::uint32_t>(t));
        CHECK(r.value == want);
        CHECK(r.corrections == wraps);
        CHECK(wraps == 511); // every product past the first laps the 32-bit word
    }

    SUBCASE("32-bit word, random inputs") {
        const std::uint64_t p = 65521;
        ffdot::ZpzField32u f(p);
        for (const std::size_t n : {std::size_t(50), std::size_t(333), std::size_t(1000)}) {
            const auto xs = random_residues(3 * n + 1, n, p);
            const auto ys = random_residues(3 * n + 2, n, p);
            std::vector<std::uint32_t> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
            const auto [want, wraps] = simulate(xs, ys, p, 32);
            const auto r = ffdot::dot_overflow(f, KernelConfig::blocked(p, 32),
                                               std::span<const std::uint32_t>(x),
                                               std::span<const std::uint32_t>(y));
            CHECK(r.value == want);
            CHECK(r.value == ffdot::oracle::dot(xs, ys, p));
            CHECK(r.corrections == wraps);
        }
    }

    SUBCASE("64-bit word, adversarial all-maximal input") {
        const std::uint64_t p = 4294967291ull;
        ffdot::ZpzField64u f(p);
        const std::size_t n = 512;
        const std::vector<std::uint64_t> top(n, p - 1);
        std::vector<std::uint64_t> t(n, p - 1);
        const auto [want, wraps] = simulate(top, top, p, 64);
        CHECK(wraps >= 3);

        const auto r = ffdot::dot_overflow(f, KernelConfig::blocked(p, 64),
                                           std::span<const std::uint64_t>(t),
                                           std::span<const std::uint64_t>(t));
        CHECK(r.value == want);
        CHECK(r.value == ffdot::oracle::dot(top, top, p));
        CHECK(r.corrections == wraps);
    }
}

TEST_CASE("hybrid kernel corrections match a blockwise wrap model") {
    const auto simulate = [](const std::vector<std::uint64_t>& xs,
                             const std::vector<std::uint64_t>& ys, std::uint64_t p,
                             unsigned m, std::uint64_t K) {
        const u128 modulus = pow2(m);
        const u128 corr = modulus % p;
        u128 w = 0;
        std::uint64_t wraps = 0;
        for (std::size_t i = 0; i < xs.size(); i += K) {
            const std::size_t end = std::min(i + std::size_t(K), xs.size());
            for (std::size_t j = i; j < end; ++j)
                w += u128(xs[j]) * ys[j];
            if (w >= modulus) { // the block bound admits at most one wrap
                w -= modulus;
                w += corr;
                ++wraps;
            }
        }
        return std::pair<std::uint64_t, std::uint64_t>(std::uint64_t(w % p), wraps);
    };

    for (const std::uint64_t p : {std::uint64_t(2897), std::uint64_t(65521)}) {
        ffdot::ZpzField32u f{std::uint32_t(p)};
        const auto cfg = KernelConfig::hybrid(p, 32);
        for (const std::size_t n : {std::size_t(512), std::size_t(3000)}) {
            CAPTURE(p);
            CAPTURE(n);
            const std::vector<std::uint64_t> top(n, p - 1);
            const auto xs = random_residues(7 * n + p, n, p);
            const auto ys = random_residues(7 * n + p + 1, n, p);
            for (const auto* pair : {&top, &xs}) {
                const auto& xv = *pair;
                const auto& yv = (pair == &top) ? top : ys;
                std::vector<std::uint32_t> x(xv.begin(), xv.end()), y(yv.begin(), yv.end());
                const auto [want, wraps] = simulate(xv, yv, p, 32, cfg.block);
                const auto r = ffdot::dot_hybrid(f, cfg, std::span<const std::uint32_t>(x),
                                                 std::span<const std::uint32_t>(y));
                CHECK(r.value == want);
                CHECK(r.value == ffdot::oracle::dot(xv, yv, p));
                CHECK(r.corrections == wraps);
                CHECK(r.reductions == (n + cfg.block - 1) / cfg.block);
            }
        }
    }
    // all-maximal input at the word's largest prime wraps in nearly every block
    {
        const std::uint64_t p = 65521;
        ffdot::ZpzField32u f(p);
        const std::vector<std::uint64_t> top(512, p - 1);
        std::vector<std::uint32_t> t(512, std::uint32_t(p - 1));
        const auto r = ffdot::dot_hybrid(f, KernelConfig::hybrid(p, 32),
                                         std::span<const std::uint32_t>(t),
                                         std::span<const std::uint32_t>(t));
        CHECK(r.corrections >= 3);
    }
}

TEST_CASE("centered overflow kernel corrections match a signed range model") {
    // model: the adjusted value always sits in [-2^(m-1), 2^(m-1)); leaving
    // the range on either side triggers the matching 2^m -+ corr repair
    const auto simulate = [](const std::vector<std::int64_t>& xs,
                             const std::vector<std::int64_t>& ys, std::uint64_t p,
                             unsigned m) {
        const i128 half = i128(1) << (m - 1);
        const i128 modulus = i128(1) << m;
        const i128 corr = i128(std::uint64_t(pow2(m) % p));
        i128 v = 0;
        std::uint64_t plus = 0, minus = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            v += i128(xs[i]) * ys[i];
            if (v >= half) {
                v -= modulus;
                v += corr;
                ++plus;
            } else if (v < -half) {
                v += modulus;
                v -= corr;
                ++minus;
            }
        }
        i128 r = v % i128(p);
        if (r < 0)
            r += i128(p);
        struct Out {
            std::uint64_t value, plus, minus;
        };
        return Out{std::uint64_t(r), plus, minus};
    };

    const std::uint64_t p = 46337;
    ffdot::ZpzField32 f(p);
    const auto cfg = KernelConfig::blocked_centered(p, 32);
    const std::int32_t h = std::int32_t((p - 1) / 2);

    SUBCASE("positive then negative walk fires both repairs") {
        // climb past +2^31 on maximal products, then dive past -2^31
        std::vector<std::int32_t> x(40, h), y(40, h);
        for (std::size_t i = 20; i < 40; ++i)
            y[i] = -h;
        std::vector<std::int64_t> xs(x.begin(), x.end()), ys(y.begin(), y.end());
        const auto sim = simulate(xs, ys, p, 32);
        CHECK(sim.plus >= 1);
        CHECK(sim.minus >= 1);

        const auto r = ffdot::dot_overflow_centered(f, cfg, std::span<const std::int32_t>(x),
                                                    std::span<const std::int32_t>(y));
        CHECK(r.value == sim.value);
        CHECK(r.corrections == sim.plus + sim.minus);
        std::vector<std::int64_t> sx(x.begin(), x.end()), sy(y.begin(), y.end());
        CHECK(r.value == ffdot::oracle::dot_signed(sx, sy, p));
    }

    SUBCASE("random centered inputs") {
        for (const std::size_t n : {std::size_t(100), std::size_t(1000), std::size_t(5000)}) {
            const auto xr = random_residues(11 * n + 3, n, p);
            const auto yr = random_residues(11 * n + 5, n, p);
            std::vector<std::int32_t> x(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = f.to_centered(std::int32_t(xr[i]));
                y[i] = f.to_centered(std::int32_t(yr[i]));
            }
            std::vector<std::int64_t> xs(x.begin(), x.end()), ys(y.begin(), y.end());
            const auto sim = simulate(xs, ys, p, 32);
            const auto r = ffdot::dot_overflow_centered(f, cfg, std::span<const std::int32_t>(x),
                                                        std::span<const std::int32_t>(y));
            CHECK(r.value == sim.value);
            CHECK(r.corrections == sim.plus + sim.minus);
            CHECK(r.value == ffdot::oracle::dot(xr, yr, p));
        }
    }

    SUBCASE("64-bit centered word") {
        const std::uint64_t q = 3037000493ull;
        ffdot::ZpzField64 f64(q);
        const std::int64_t hh = std::int64_t((q - 1) / 2);
        std::vector<std::int64_t> x(20, hh), y(20, hh);
        for (std::size_t i = 10; i < 20; ++i)
            y[i] = -hh;
        const auto sim = simulate(x, y, q, 64);
        CHECK(sim.plus >= 1);
        CHECK(sim.minus >= 1);
        const auto r = ffdot::dot_overflow_centered(f64, KernelConfig::blocked_centered(q, 64),
                                                    std::span<const std::int64_t>(x),
                                                    std::span<const std::int64_t>(y));
        CHECK(r.value == sim.value);
        CHECK(r.corrections == sim.plus + sim.minus);
        CHECK(r.value == ffdot::oracle::dot_signed(x, y, q));
    }
}

TEST_CASE("blockwise wrap detection cannot be transplanted onto centered words") {
    // The unsigned hybrid works because a block's contribution is nonnegative
    // and under 2^m, so sum_after < sum_before is exactly a wrap. On centered
    // words a block sum can be legitimately negative, and (after - before)
    // mod 2^m carries no wrap information. Both repair policies available to
    // a signed blockwise scheme fail on simple inputs; this pins the reason
    // there is no centered hybrid kernel.
    const std::uint64_t p = 46337;
    ffdot::ZpzField32 f(p);
    const std::uint32_t CORR = std::uint32_t(pow2(32) % p);
    const std::size_t K = 4;

    // policy A: treat every decrease as a positive wrap; policy B: never repair
    const auto blockwise = [&](const std::vector<std::int32_t>& x,
                               const std::vector<std::int32_t>& y, bool repair_on_decrease) {
        std::uint32_t sum = 0;
        for (std::size_t i = 0; i < x.size(); i += K) {
            const std::size_t end = std::min(i + K, x.size());
            const auto before = std::int32_t(sum);
            for (std::size_t j = i; j < end; ++j)
                sum += std::uint32_t(std::int32_t(x[j] * y[j]));
            if (repair_on_decrease && std::int32_t(sum) < before)
                sum += CORR;
        }
        auto s = std::int32_t(std::int32_t(sum) % std::int32_t(p));
        if (s < 0)
            s += std::int32_t(p);
        return std::uint64_t(s);
    };

    const std::int32_t h = std::int32_t((p - 1) / 2);

    // all products equal -1: every block decreases without any wrap
    const std::vector<std::int32_t> ones(8, 1), minus(8, -1);
    std::vector<std::int64_t> s_ones(ones.begin(), ones.end()),
        s_minus(minus.begin(), minus.end());
    const std::uint64_t want_neg = ffdot::oracle::dot_signed(s_ones, s_minus, p);
    CHECK(blockwise(ones, minus, true) != want_neg);  // repairs phantom wraps
    CHECK(blockwise(ones, minus, false) == want_neg); // nothing to repair here

    // maximal positive products: the sum genuinely crosses +2^31
    const std::vector<std::int32_t> top(8, h);
    std::vector<std::int64_t> s_top(top.begin(), top.end());
    const std::uint64_t want_pos = ffdot::oracle::dot_signed(s_top, s_top, p);
    CHECK(blockwise(top, top, true) == want_pos);  // decrease happens to mean wrap here
    CHECK(blockwise(top, top, false) != want_pos); // the crossing goes unrepaired

    // no single policy serves both inputs, while the per-element centered
    // kernel and its sign tests handle them fine
    const auto cfg = KernelConfig::blocked_centered(p, 32);
    CHECK(ffdot::dot_overflow_centered(f, cfg, std::span<const std::int32_t>(ones),
                                       std::span<const std::int32_t>(minus))
              .value == want_neg);
    CHECK(ffdot::dot_overflow_centered(f, cfg, std::span<const std::int32_t>(top),
                                       std::span<const std::int32_t>(top))
              .value == want_pos);
}

TEST_CASE("hybrid reductions at dim 512 step exactly where p*(p-1) crosses 2^23") {
    // block >= 512 over a 32-bit word means lambda = (2^32-1)/(p(p-1)) >= 512,
    // which is the integer statement p*(p-1) < 2^23
    const std::size_t n = 512;
    for (const std::uint64_t p : {std::uint64_t(3), std::uint64_t(101), std::uint64_t(1009),
                                  std::uint64_t(2887), std::uint64_t(2897), std::uint64_t(32749),
                                  std::uint64_t(65521)}) {
        CAPTURE(p);
        ffdot::ZpzField32u f{std::uint32_t(p)};
        const auto xs = random_residues(p, n, p);
        const auto ys = random_residues(p + 1, n, p);
        std::vector<std::uint32_t> x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
        const auto r = ffdot::dot_hybrid(f, KernelConfig::hybrid(p, 32),
                                         std::span<const std::uint32_t>(x),
                                         std::span<const std::uint32_t>(y));
        CHECK(r.value == ffdot::oracle::dot(xs, ys, p));
        const bool one_reduction = u128(p) * (p - 1) < pow2(23);
        CHECK((r.reductions == 1) == one_reduction);
    }
    // 2887 and 2897 are adjacent primes and straddle the threshold
    CHECK(ffdot::next_prime(2888) == 2897);
    CHECK(u128(2887) * 2886 < pow2(23));
    CHECK(u128(2897) * 2896 >= pow2(23));
}
